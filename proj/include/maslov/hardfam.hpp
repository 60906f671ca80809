#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/formula.hpp"
#include "maslov/structure.hpp"

namespace maslov {

// Bijection on [n], stored as images of 1..n.
struct Permutation {
  std::vector<int> img;

  static Permutation identity(int n);
  static Permutation gamma(int n);  // 1 -> 2 -> ... -> n -> 1
  int size() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i - 1]; }
  Permutation inverse() const;
  Permutation pow(int e) const;  // negative e allowed
  bool valid() const;
  std::string str() const;
  auto operator<=>(const Permutation&) const = default;
};

// (a * b)(i) = a(b(i))
Permutation operator*(const Permutation& a, const Permutation& b);

// All permutations of [n] in lexicographic order of their image arrays.
std::vector<Permutation> all_permutations(int n);
// Position of p in all_permutations(p.size()).
int permutation_rank(const Permutation& p);

// Relation names used for the two generated families.
inline constexpr const char* kHardRels[] = {"P", "W", "Cr", "S", "Cl", "Z"};

Formula gen_phi_n(int n);
Formula gen_phi_n_constant_free(int n);

// Unnamed element rank(pi)+1 is the permutation pi, which is also its own witness.
// Constants are c1..cn, q0, q1 in that order.
Structure prototypical_model(int n);

// Model of the constant-free sentence: elements 1..n play c1..cn, n+1 plays q0, n+2 plays q1,
// and n+3+rank(pi) is pi.
Structure prototypical_model_constant_free(int n);

struct Decomposition {
  int j = 0, k = 0;
  Permutation rho;
};

// pi2 = gamma^-j * rho * gamma^k * pi with 0 <= j < k < n and rho(n) = n; none when pi2 == pi.
std::optional<Decomposition> decompose_permutation(const Permutation& pi, const Permutation& pi2);
// Every triple (j, k, rho) meeting the bounds that recomposes pi to pi2, by enumeration.
std::vector<Decomposition> decompositions_brute(const Permutation& pi, const Permutation& pi2);

// Argument tuple c_{pi(1)}..c_{pi(n)} | mid | q1^ones q0^(n-ones) of the constant variant.
Tuple hard_tuple(const Permutation& pi, int mid, int ones);

struct ChainReport {
  bool ok = true;
  int j = 0, k = 0;
  std::string failed;  // first step that did not hold
};

// Follows the proof that w_pi cannot serve pi2 through the tables of A (constant variant):
// P, W, then Cr at counter k, S, Cl at counter k-j, Z down to 0, and W false at the end.
ChainReport chain_property(const Structure& A, const Permutation& pi, const Permutation& pi2);

}  // namespace maslov
