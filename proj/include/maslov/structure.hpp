#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "maslov/formula.hpp"

namespace maslov {

using Tuple = std::vector<int>;

// Open-addressing set of fixed-arity int tuples; lookups do not allocate.
class TupleSet {
 public:
  explicit TupleSet(int arity = 0) : arity_(arity) {}
  int arity() const { return arity_; }
  size_t size() const { return count_; }
  bool contains(const int* t) const;
  bool contains(const Tuple& t) const { return contains(t.data()); }
  bool insert(const int* t);
  bool insert(const Tuple& t) { return insert(t.data()); }
  Tuple at(size_t i) const { return Tuple(data_.begin() + i * arity_, data_.begin() + (i + 1) * arity_); }
  const int* raw(size_t i) const { return data_.data() + i * arity_; }
  std::vector<Tuple> sorted() const;

 private:
  int arity_;
  size_t count_ = 0;
  std::vector<int> data_;
  std::vector<int64_t> slots_;  // index into data_ / arity, or -1
  uint64_t hash(const int* t) const;
  void grow();
};

enum class Truth { False, True, Undef };

// Finite structure over unnamed {1..k} plus the signature's constants.
// Total: listed tuples true, others false. Partial: a tuple is defined iff the
// set of unnamed elements in it is one of `defined`; defined and unlisted means false.
struct Structure {
  Signature sig;
  int unnamed = 0;
  bool total = true;
  std::set<std::vector<int>> defined;
  std::vector<TupleSet> rels;

  Structure() = default;
  Structure(Signature s, int k, bool is_total);

  Truth truth(int rel, const int* t) const;
  Truth truth(int rel, const Tuple& t) const { return truth(rel, t.data()); }
  void set_true(int rel, const Tuple& t) { rels[rel].insert(t); }
  bool is_defined_set(const std::vector<int>& s) const { return total || defined.count(s) > 0; }
  // Domain in enumeration order: constants first, then 1..k.
  std::vector<int> domain() const;
  std::string key() const;  // canonical serialisation
  bool operator==(const Structure& o) const { return key() == o.key(); }
};

std::vector<int> unnamed_set(const int* t, int n);
inline std::vector<int> unnamed_set(const Tuple& t) { return unnamed_set(t.data(), static_cast<int>(t.size())); }

class UndefinedAtom : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string element_name(const Signature& sig, int e);
std::string atom_name(const Signature& sig, int rel, const Tuple& t);

// Assignment: var id -> element, 0 for unassigned.
using Assignment = std::vector<int>;

// Tarskian evaluation by exhausting assignments. Throws UndefinedAtom.
// Symbols of phi are matched to A's signature by name.
bool model_check(const Structure& A, const Formula& phi, const Assignment& f = {}, int jobs = 1);

// A restricted to the given signature (relations and constants matched by name).
Structure reduct(const Structure& A, const Signature& sig);

}  // namespace maslov
