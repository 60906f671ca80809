#pragma once

#include <string>
#include <vector>

#include "maslov/formula.hpp"
#include "maslov/structure.hpp"

namespace maslov {

// Partition of a signature's constants (by index); rep[i] is the least index in i's block.
struct ConstantPartition {
  std::vector<std::vector<int>> blocks;
  std::vector<int> rep;

  static ConstantPartition from_blocks(int n, std::vector<std::vector<int>> blocks);
  static ConstantPartition identity(int n);
  std::string to_string(const Signature& sig) const;
};

// Parses "c1 c2 | c3" (blocks separated by '|') against sig's constants.
ConstantPartition parse_partition(const Signature& sig, const std::string& text);

// All set partitions of n constants in restricted-growth order; n <= 8.
std::vector<ConstantPartition> enumerate_partitions(int n);

// Replaces each constant by its representative; non-representatives leave the signature.
Formula reduce_constants(const Formula& phi, const ConstantPartition& p);

// Interprets every dropped constant as a fresh twin of its representative: the twin
// satisfies exactly the atoms its representative does, so equality-free sentences
// cannot tell them apart. B is over the reduced signature, the result over `full`.
Structure expand_model(const Structure& B, const ConstantPartition& p, const Signature& full);

struct FaufPredicate {
  std::string name;
  int rel = -1;          // index in the translated signature
  int free_var = -1;     // -1 for arity 0
  std::vector<int> block;  // universally bound variables of mu
  NodePtr mu;            // the replaced subformula, over the input's variables
};

struct FaufTranslation {
  Formula source;                 // rectified NNF of the input; mu nodes live here
  Formula tr;                     // Tr[phi]
  std::vector<Formula> axioms;    // Ax[mu], one per predicate, innermost first
  std::vector<FaufPredicate> preds;
  Formula conjunction() const;    // Tr[phi] & Ax[...] & ...
  std::vector<Formula> conjuncts() const;
};

// Requires phi in forall-UF (throws std::invalid_argument otherwise).
FaufTranslation translate_fauf(const Formula& phi);

// Expansion of a model of phi: P_mu read off from A (the recipe used in the correctness proof).
Structure expand_fauf_model(const Structure& A, const FaufTranslation& t);

// DNF over the top-level and/or skeleton whose leaves are Kbar sentences.
std::vector<Formula> split_positive_boolean(const Formula& phi);

}  // namespace maslov
