#pragma once

#include <map>
#include <string>
#include <vector>

#include "maslov/structure.hpp"

namespace maslov {

enum class TypeKind { One, Outer, Hull };

// A type is a partial Structure over [k]; its `defined` family encodes the kind.
Structure make_type(const Signature& sig, int k, TypeKind kind);

// Restriction of S to the distinct unnamed elements a (a_i renamed to i).
Structure restrict_type(const Structure& S, const std::vector<int>& a, TypeKind kind);

Structure outer_type_of(const Structure& A, const std::vector<int>& a);
Structure one_type_of(const Structure& S, int e);
Structure zero_type_of(const Structure& S);
// Atoms whose unnamed set is exactly {a_1..a_k}, renamed a_i -> i.
Structure hull_type_of(const Structure& S, const std::vector<int>& a);

struct OuterTypeSet {
  Signature sig;
  int max_grade = 0;
  std::vector<Structure> members;  // no duplicates; normalize() sorts by (grade, key)

  bool insert(Structure t);
  bool contains(const Structure& t) const;
  std::vector<const Structure*> of_grade(int k) const;
  std::vector<Structure> ones() const;
  size_t size() const { return members.size(); }
  void normalize();

 private:
  std::map<std::pair<int, std::string>, size_t> pos_;
};

// Tuple permuted: result's element i is t's element perm[i] (perm 0-based).
Structure permute_type(const Structure& t, const std::vector<int>& perm);

// Copies of every element (constants included, as unnamed twins); R(a) iff R(orig(a)).
Structure augment(const Structure& A, int copies);

OuterTypeSet extract_type_set(const Structure& A, int G);

struct ClosureReport {
  bool consistent = true;
  bool projections = true;
  bool permutations = true;
  bool extensions = true;
  std::vector<std::string> violations;
  bool ok() const { return consistent && projections && permutations && extensions; }
};

ClosureReport check_closed(const OuterTypeSet& beta, int G);

// Index of outer-types by their 1-type sequence, used by the game and model builder.
struct TypeIndex {
  std::vector<Structure> ones;
  std::map<std::string, int> one_id;
  std::map<std::vector<int>, std::vector<const Structure*>> by_ones;  // key: 1-type ids

  explicit TypeIndex(const OuterTypeSet& beta);
  int id_of_one(const Structure& one) const;  // -1 if absent
  std::vector<int> one_ids(const Structure& outer) const;
};

}  // namespace maslov
