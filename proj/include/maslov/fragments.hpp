#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maslov/formula.hpp"

namespace maslov {

struct Binder {
  Op q;
  int var;
  bool operator==(const Binder&) const = default;
};
using Prefix = std::vector<Binder>;

struct PrefixProfile {
  std::vector<NodePtr> atoms;
  std::vector<Prefix> prefixes;       // parallel to atoms
  std::vector<int> universals;        // in binding order
  std::set<int> under_exists;         // universal vars inside some existential scope
};

class NotRelaxed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Negation normal form under the relaxed convention: -> is rewritten only when its
// left side is quantifier-free; a negation reaching a quantifier throws NotRelaxed.
Formula to_nnf(const Formula& f);

PrefixProfile compute_prefixes(const Formula& nnf);

enum class FragClass { Kbar, DKbar, KbarSkolem, KbarForallK, Ackermann, Goedel, ForallUF, None };

struct Classification {
  std::set<FragClass> classes;
  int grade = 0;
  std::vector<int> specials;
  std::vector<std::string> special_names;
  int universal_count = 0;
  int forall_k = -1;  // k of K̄^{∀=k}, -1 if not in K̄
  std::vector<std::string> diagnostics;
  bool has(FragClass c) const { return classes.count(c) > 0; }
};

std::string class_name(FragClass c, int k = 0);

Classification classify(const Formula& phi);
std::string classification_json(const Classification& c);

// Checks K̄ on one NNF sentence; fills specials and diagnostics.
bool kbar_specials(const Formula& nnf, std::vector<int>& specials, std::vector<std::string>& diag);

bool in_forall_uf(const Formula& phi, std::string* why = nullptr);

struct Prenex {
  Formula formula;             // full prenex sentence
  std::vector<int> specials;   // x_1..x_K
  std::vector<Binder> word;    // Q_1 y_1 .. Q_M y_M
  NodePtr matrix;              // psi
  bool dummy_special = false;
  bool dummy_exists = false;

  int K() const { return static_cast<int>(specials.size()); }
  int M() const { return static_cast<int>(word.size()); }
  // Vars in game order: x_1..x_K, y_1..y_M
  std::vector<int> vars() const;
};

// Requires K̄. Moves the specials to the front and prenexes the rest.
Prenex to_prenex(const Formula& phi, bool ensure_exists = false);

// Rebuilds a sentence from a prenex word and matrix.
Formula prenex_sentence(const Formula& base, const std::vector<Binder>& binders, const NodePtr& matrix);

// Top-level conjuncts of the NNF, each rectified as its own sentence.
std::vector<Formula> conjuncts(const Formula& phi);

}  // namespace maslov
