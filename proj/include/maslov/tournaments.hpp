#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maslov {

// Read-only colourful tournament; vertex colours in [0, num_r), arc colours in [0, num_q).
class ColourfulView {
 public:
  virtual ~ColourfulView() = default;
  virtual int size() const = 0;
  virtual bool arc(int u, int v) const = 0;  // u -> v
  virtual int mu(int v) const = 0;
  virtual int lambda(int u, int v) const = 0;  // meaningful only if u -> v
  virtual int num_r() const = 0;
  virtual int num_q() const = 0;
};

class ColourfulTournament : public ColourfulView {
 public:
  ColourfulTournament() = default;
  ColourfulTournament(int n, int num_r, int num_q);

  int size() const override { return n_; }
  bool arc(int u, int v) const override { return out_[u * words_ + v / 64] >> (v % 64) & 1; }
  int mu(int v) const override { return mu_[v]; }
  int lambda(int u, int v) const override { return label_[static_cast<size_t>(u) * n_ + v]; }
  int num_r() const override { return num_r_; }
  int num_q() const override { return num_q_; }

  // Orients u -> v (replacing v -> u) with the given arc colour.
  void set_arc(int u, int v, int label = 0);
  void set_mu(int v, int r) { mu_[v] = r; }
  void set_colour_counts(int num_r, int num_q) { num_r_ = num_r, num_q_ = num_q; }

  // Bit rows: vertices b with b -> a, and vertices b with a -> b.
  const uint64_t* dominators(int a) const { return in_.data() + static_cast<size_t>(a) * words_; }
  const uint64_t* successors(int a) const { return out_.data() + static_cast<size_t>(a) * words_; }
  int words() const { return words_; }

 private:
  int n_ = 0, num_r_ = 1, num_q_ = 1, words_ = 0;
  std::vector<uint64_t> out_, in_;
  std::vector<int> mu_, label_;
};

ColourfulTournament materialize(const ColourfulView& v);

// Every pair joined by exactly one arc, no loops.
bool is_tournament(const ColourfulView& t);

bool colourfully_dominates(const ColourfulView& t, int b, const std::vector<int>& a, int r,
                           const std::vector<int>& q);

struct ParadoxReport {
  bool pass = true;
  int r = -1;
  std::vector<int> a, q;  // first failing triple (a in increasing order)
  uint64_t tuples_checked = 0;
  std::string describe() const;
};

// Exhaustive over (r, distinct a of length num_q, q). Only sets are enumerated: a
// dominator of one ordering via q is a dominator of any reordering via the permuted q.
ParadoxReport verify_paradoxical(const ColourfulTournament& t, int jobs = 1);

// Random triples, each resolved by scanning every vertex; for views too large to enumerate.
ParadoxReport spot_check_paradoxical(const ColourfulView& t, int samples, uint64_t seed);

// V = R x [n], mu = first projection, orientations and arc colours uniform.
ColourfulTournament sample_random(int num_r, int num_q, int n, uint64_t seed);
// Arbitrary vertex count with uniform vertex colours too; used for lower-bound checks.
ColourfulTournament sample_random_vertices(int nv, int num_r, int num_q, uint64_t seed);

// ceil(10 (2l)^(l+1) (ln|R| + l ln l)), ln l floored at 0, and at least l.
int default_sample_n(int num_r, int num_q);

struct SampleResult {
  std::optional<ColourfulTournament> tournament;
  int attempts = 0;
  int n = 0;  // per-colour multiplicity of the accepted sample
};

// Samples and verifies, doubling n after each failure up to max_n (then resampling at
// max_n); seeds are seed, seed+1, ...
SampleResult sample_paradoxical(int num_r, int num_q, uint64_t seed, int start_n = 0, int max_n = 0,
                                int max_attempts = 32, int jobs = 1);

// --- Paley tournaments over prime fields ---

bool is_prime(uint64_t p);
bool is_qr(uint64_t a, uint64_t p);  // nonzero quadratic residue mod p

class PaleyTournament : public ColourfulView {
 public:
  explicit PaleyTournament(uint64_t p);  // p prime, p = 3 mod 4
  int size() const override { return static_cast<int>(p_); }
  bool arc(int u, int v) const override;
  int mu(int) const override { return 0; }
  int lambda(int, int) const override { return 0; }
  int num_r() const override { return 1; }
  int num_q() const override { return 1; }
  uint64_t p() const { return p_; }

 private:
  uint64_t p_;
};

ColourfulTournament build_paley(uint64_t p);

struct ExtensionReport {
  bool pass = true;
  std::vector<int> A, C;  // first failing pair
};

ExtensionReport verify_k_extension(const ColourfulTournament& t, int k);

// n = sum_i [a_i -> b] 2^(i-1).
uint64_t repr(const std::vector<int>& a, int b, const ColourfulView& t);

struct PaleyDecomposition {
  uint64_t p = 0;
  int t = 0, m = 0, k = 0;
  std::vector<int> control_bit, control_mu;
  std::vector<std::vector<int>> classes;  // C_1..C_{2^t}, ascending size
  std::vector<int> class_repr;            // original repr index of each class
  int n_star = 0;
  std::vector<std::vector<int>> s;  // s[i]: tuple paired with classes[0][i]
};

// The colourful tournament on C_1 with mu(b) = repr(Control_mu, b) and
// lambda(b -> b') = repr(s(b'), b); arcs are evaluated on demand.
class PaleyColourful : public ColourfulView {
 public:
  PaleyColourful(uint64_t p, int t, int m);
  int size() const override { return static_cast<int>(dec_.classes[0].size()); }
  bool arc(int u, int v) const override;
  int mu(int v) const override;
  int lambda(int u, int v) const override;
  int num_r() const override { return 1 << dec_.m; }
  int num_q() const override { return 1 << ((1 << dec_.t) - 1); }
  const PaleyDecomposition& decomposition() const { return dec_; }
  int vertex(int i) const { return dec_.classes[0][i]; }  // Paley vertex of i

 private:
  PaleyTournament base_;
  PaleyDecomposition dec_;
};

// k = t + m + 2^(2^t - 1) 2^t.
int paley_k(int t, int m);
// Least prime p = 3 mod 4 with p >= k^2 2^(2k); 0 if it would exceed max_p.
uint64_t paley_prime_for(int k, uint64_t max_p);

class ResourceGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws ResourceGuard naming the required p when p would exceed max_p.
PaleyColourful build_paley_colourful(int t, int m, uint64_t max_p = 4000000);

}  // namespace maslov
