#include "maslov/hardfam.hpp"

#include <algorithm>
#include <stdexcept>

#include "maslov/tournaments.hpp"

namespace maslov {

Permutation Permutation::identity(int n) {
  Permutation p;
  for (int i = 1; i <= n; ++i) p.img.push_back(i);
  return p;
}

Permutation Permutation::gamma(int n) {
  Permutation p;
  for (int i = 1; i <= n; ++i) p.img.push_back(i % n + 1);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.img.resize(img.size());
  for (int i = 1; i <= size(); ++i) p.img[(*this)(i) - 1] = i;
  return p;
}

Permutation Permutation::pow(int e) const {
  Permutation base = e < 0 ? inverse() : *this, out = identity(size());
  for (int i = 0; i < std::abs(e); ++i) out = out * base;
  return out;
}

bool Permutation::valid() const {
  std::vector<char> seen(img.size() + 1, 0);
  for (int v : img) {
    if (v < 1 || v > size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::string Permutation::str() const {
  std::string s = "[";
  for (int i = 0; i < size(); ++i) s += (i ? " " : "") + std::to_string(img[i]);
  return s + "]";
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation sizes differ");
  Permutation p;
  for (int i = 1; i <= b.size(); ++i) p.img.push_back(a(b(i)));
  return p;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  Permutation p = Permutation::identity(n);
  do out.push_back(p);
  while (std::next_permutation(p.img.begin(), p.img.end()));
  return out;
}

int permutation_rank(const Permutation& p) {
  int n = p.size(), rank = 0;
  std::vector<int> fact(n + 1, 1);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p.img[j] < p.img[i]) ++smaller;
    rank += smaller * fact[n - 1 - i];
  }
  return rank;
}

namespace {

// Shared builder for both variants; with constant_free, q0 and q1 are universal variables
// carried in an extra two-argument block after the middle argument.
struct HardBuilder {
  int n;
  bool free;
  Formula f;
  std::vector<Term> x, r;
  Term y, w, q0, q1;
  std::vector<Term> c;
  int rel[6];
  int F = -1, U = -1;

  HardBuilder(int n_, bool free_) : n(n_), free(free_) {
    if (n < 3) throw std::invalid_argument("the hard family needs n >= 3");
    int width = 2 * n + 1 + (free ? 2 : 0);
    if (!free) {
      for (int i = 1; i <= n; ++i) c.push_back(const_term(f.sig.add_constant("c" + std::to_string(i))));
      q0 = const_term(f.sig.add_constant("q0"));
      q1 = const_term(f.sig.add_constant("q1"));
    }
    for (int i = 0; i < 6; ++i) rel[i] = f.sig.add_relation(kHardRels[i], width);
    if (free) {
      U = f.sig.add_relation("U", 1);
      F = f.sig.add_relation("F", width);
    }
    for (int i = 1; i <= n; ++i) x.push_back(var_term(f.new_var("x" + std::to_string(i))));
    y = var_term(f.new_var("y"));
    if (free) {
      q0 = var_term(f.new_var("q0"));
      q1 = var_term(f.new_var("q1"));
    }
    for (int i = 1; i <= n - 2; ++i) r.push_back(var_term(f.new_var("r" + std::to_string(i))));
    w = var_term(f.new_var("w"));
  }

  NodePtr atom(int R, const std::vector<Term>& xs, Term mid, const std::vector<Term>& ctr) const {
    std::vector<Term> args = xs;
    args.push_back(mid);
    if (free) {
      args.push_back(q0);
      args.push_back(q1);
    }
    args.insert(args.end(), ctr.begin(), ctr.end());
    return mk_atom(R, args);
  }

  // Counter blocks used by the templates.
  std::vector<Term> r00() const { return cat({}, r, {q0, q0}); }
  std::vector<Term> one_r0() const { return cat({q1}, r, {q0}); }
  std::vector<Term> ones2_r() const { return cat({q1, q1}, r, {}); }
  std::vector<Term> zeros() const { return std::vector<Term>(n, q0); }

  static std::vector<Term> cat(std::vector<Term> a, const std::vector<Term>& b, const std::vector<Term>& c) {
    a.insert(a.end(), b.begin(), b.end());
    a.insert(a.end(), c.begin(), c.end());
    return a;
  }

  // x permuted so that position i holds x[idx[i]-1].
  std::vector<Term> px(const std::vector<int>& idx) const {
    std::vector<Term> out;
    for (int i : idx) out.push_back(x[i - 1]);
    return out;
  }
  std::vector<int> swap12() const {
    std::vector<int> v{2, 1};
    for (int i = 3; i <= n; ++i) v.push_back(i);
    return v;
  }
  std::vector<int> shift_left() const {  // x2..xn, x1
    std::vector<int> v;
    for (int i = 2; i <= n; ++i) v.push_back(i);
    v.push_back(1);
    return v;
  }
  std::vector<int> shift_left_short() const {  // x2..x_{n-1}, x1, xn
    std::vector<int> v;
    for (int i = 2; i <= n - 1; ++i) v.push_back(i);
    v.push_back(1);
    v.push_back(n);
    return v;
  }
  std::vector<int> shift_right() const {  // xn, x1..x_{n-1}
    std::vector<int> v{n};
    for (int i = 1; i <= n - 1; ++i) v.push_back(i);
    return v;
  }

  std::vector<NodePtr> originals() const {
    enum { P, W, Cr, S, Cl, Z };
    std::vector<NodePtr> mu;
    // perm
    auto P_in = atom(rel[P], x, y, r00());
    mu.push_back(mk_implies(P_in, mk_and({atom(rel[P], px(swap12()), y, r00()), atom(rel[P], px(shift_left()), y, r00())})));
    // witness
    mu.push_back(mk_implies(P_in, atom(rel[W], x, w, zeros())));
    // cyclic
    mu.push_back(mk_implies(atom(rel[W], x, y, r00()), atom(rel[Cr], px(shift_left()), y, one_r0())));
    mu.push_back(mk_implies(atom(rel[Cr], x, y, r00()), atom(rel[Cr], px(shift_left()), y, one_r0())));
    // smaller
    mu.push_back(mk_implies(atom(rel[Cr], x, y, one_r0()), atom(rel[S], x, y, one_r0())));
    mu.push_back(mk_implies(atom(rel[S], x, y, one_r0()), mk_and({atom(rel[S], px(swap12()), y, one_r0()),
                                                                   atom(rel[S], px(shift_left_short()), y, one_r0())})));
    // cyclic inverse
    mu.push_back(mk_implies(atom(rel[S], x, y, one_r0()), atom(rel[Cl], x, y, one_r0())));
    mu.push_back(mk_implies(atom(rel[Cl], x, y, ones2_r()), atom(rel[Cl], px(shift_right()), y, one_r0())));
    // decrease
    mu.push_back(mk_implies(atom(rel[Cl], x, y, one_r0()), atom(rel[Z], x, y, r00())));
    mu.push_back(mk_implies(atom(rel[Z], x, y, one_r0()), atom(rel[Z], x, y, r00())));
    // neg
    mu.push_back(mk_implies(atom(rel[Z], x, y, r00()), mk_not(atom(rel[W], x, y, r00()))));
    return mu;
  }

  NodePtr F_atom(const std::vector<Term>& xs, Term mid, Term b0, Term b1, const std::vector<Term>& ctr) const {
    std::vector<Term> args = xs;
    args.push_back(mid);
    args.push_back(b0);
    args.push_back(b1);
    args.insert(args.end(), ctr.begin(), ctr.end());
    return mk_atom(F, args);
  }
  NodePtr Ua(Term t) const { return mk_atom(U, {t}); }

  Formula finish(std::vector<NodePtr> mu) {
    NodePtr body = mk_quant(Op::Exists, w.id, mk_and(std::move(mu)));
    std::vector<Term> univ = x;
    univ.push_back(y);
    if (free) {
      univ.push_back(q0);
      univ.push_back(q1);
    }
    univ.insert(univ.end(), r.begin(), r.end());
    for (auto it = univ.rbegin(); it != univ.rend(); ++it) body = mk_quant(Op::Forall, it->id, body);
    f.root = body;
    return f;
  }
};

}  // namespace

Formula gen_phi_n(int n) {
  HardBuilder b(n, false);
  std::vector<NodePtr> mu{b.atom(b.rel[0], b.c, b.q0, b.zeros())};
  for (auto& m : b.originals()) mu.push_back(m);
  return b.finish(std::move(mu));
}

Formula gen_phi_n_constant_free(int n) {
  HardBuilder b(n, true);
  std::vector<NodePtr> mu;
  auto zeros = b.zeros();
  auto last = b.r00();
  // neg: an element outside U
  mu.push_back(mk_implies(b.Ua(b.q0), mk_not(b.Ua(b.w))));
  // unif.: the seed atom with w in the role of q1
  mu.push_back(mk_implies(mk_and({mk_not(b.Ua(b.q0)), mk_not(b.Ua(b.q1))}),
                          mk_and({b.F_atom(zeros, b.q0, b.q0, b.w, zeros), b.Ua(b.w)})));
  // shift: push a fresh U-element in front while the last slot is still outside U
  std::vector<Term> shifted{b.w};
  shifted.insert(shifted.end(), b.x.begin(), b.x.end() - 1);
  auto F_in = b.F_atom(b.x, b.y, b.q0, b.q1, last);
  mu.push_back(mk_implies(mk_and({F_in, mk_not(b.Ua(b.x.back()))}),
                          mk_and({b.F_atom(shifted, b.y, b.q0, b.q1, last), b.Ua(b.w)})));
  // first perm
  mu.push_back(mk_implies(mk_and({F_in, b.Ua(b.x.back())}), b.atom(b.rel[0], b.x, b.y, last)));
  for (auto& m : b.originals()) mu.push_back(m);
  return b.finish(std::move(mu));
}

namespace {

// Right action of gamma, rho on tuples: position m of T(sigma) holds c_{sigma(m)}, and the
// shifts in the templates turn T(sigma) into T(sigma * gamma) or T(sigma * gamma^-1).
struct Orbit {
  Permutation pi2;
  int k, j;  // counter k - j on Cl, k on Cr and S
};

std::vector<Permutation> fixing_last(int n) {
  std::vector<Permutation> out;
  for (auto& p : all_permutations(n))
    if (p(n) == n) out.push_back(p);
  return out;
}

void check_n(int n) {
  if (n < 3) throw std::invalid_argument("the hard family needs n >= 3");
  if (n > 4) throw ResourceGuard("prototypical models are limited to n <= 4");
}

template <class Emit>
void fill_tables(int n, Emit emit) {
  // emit(rel, sigma, mid_perm (or nullptr for q0), ones)
  auto perms = all_permutations(n);
  auto rhos = fixing_last(n);
  Permutation g = Permutation::gamma(n);
  for (auto& pi : perms) {
    emit(0, pi, nullptr, 0);
    emit(1, pi, &pi, 0);
    for (int k = 1; k < n; ++k) {
      Permutation gk = pi * g.pow(k);
      emit(2, gk, &pi, k);
      for (auto& rho : rhos) {
        Permutation s = gk * rho;
        emit(3, s, &pi, k);
        for (int j = 0; j < k; ++j) {
          Permutation p2 = s * g.pow(-j);
          emit(4, p2, &pi, k - j);
          for (int m = 0; m <= k - j; ++m) emit(5, p2, &pi, m);
        }
      }
    }
  }
}

}  // namespace

Tuple hard_tuple(const Permutation& pi, int mid, int ones) {
  int n = pi.size();
  Tuple t;
  for (int i = 1; i <= n; ++i) t.push_back(const_elem(pi(i) - 1));
  t.push_back(mid);
  for (int i = 0; i < n; ++i) t.push_back(const_elem(i < ones ? n + 1 : n));
  return t;
}

Structure prototypical_model(int n) {
  check_n(n);
  Formula f = gen_phi_n(n);
  int count = static_cast<int>(all_permutations(n).size());
  Structure A(f.sig, count, true);
  int q0 = const_elem(n);
  fill_tables(n, [&](int R, const Permutation& s, const Permutation* mid, int ones) {
    A.set_true(f.sig.relation_index(kHardRels[R]), hard_tuple(s, mid ? permutation_rank(*mid) + 1 : q0, ones));
  });
  return A;
}

Structure prototypical_model_constant_free(int n) {
  check_n(n);
  Formula f = gen_phi_n_constant_free(n);
  int count = static_cast<int>(all_permutations(n).size());
  int e0 = n + 1, e1 = n + 2;
  Structure A(f.sig, n + 2 + count, true);
  auto row = [&](const std::vector<int>& xs, int mid, int ones) {
    Tuple t = xs;
    t.push_back(mid);
    t.push_back(e0);
    t.push_back(e1);
    for (int i = 0; i < n; ++i) t.push_back(i < ones ? e1 : e0);
    return t;
  };
  int U = f.sig.relation_index("U"), F = f.sig.relation_index("F");
  for (int e = 1; e <= n + 2 + count; ++e)
    if (e != e0) A.set_true(U, {e});
  for (int m = 0; m <= n; ++m) {
    std::vector<int> xs;
    for (int i = n - m + 1; i <= n; ++i) xs.push_back(i);
    while (static_cast<int>(xs.size()) < n) xs.push_back(e0);
    A.set_true(F, row(xs, e0, 0));
  }
  fill_tables(n, [&](int R, const Permutation& s, const Permutation* mid, int ones) {
    A.set_true(f.sig.relation_index(kHardRels[R]), row(s.img, mid ? n + 3 + permutation_rank(*mid) : e0, ones));
  });
  return A;
}

std::optional<Decomposition> decompose_permutation(const Permutation& pi, const Permutation& pi2) {
  int n = pi.size();
  if (pi2.size() != n) throw std::invalid_argument("decompose_permutation: size mismatch");
  int i = 1;
  while (i <= n && pi2(i) <= pi(i)) ++i;
  if (i > n) {
    if (pi2 != pi) throw std::logic_error("decompose_permutation: no index with pi2(i) > pi(i)");
    return std::nullopt;
  }
  Permutation g = Permutation::gamma(n);
  Decomposition d;
  d.k = n - pi(i);
  d.j = n - pi2(i);
  d.rho = g.pow(d.j) * pi2 * pi.inverse() * g.pow(-d.k);
  if (!(0 <= d.j && d.j < d.k && d.k < n) || d.rho(n) != n || g.pow(-d.j) * d.rho * g.pow(d.k) * pi != pi2)
    throw std::logic_error("decompose_permutation: invalid triple");
  return d;
}

std::vector<Decomposition> decompositions_brute(const Permutation& pi, const Permutation& pi2) {
  int n = pi.size();
  if (pi2.size() != n) throw std::invalid_argument("decompositions_brute: size mismatch");
  Permutation g = Permutation::gamma(n);
  std::vector<Decomposition> out;
  for (auto& rho : fixing_last(n))
    for (int k = 1; k < n; ++k)
      for (int j = 0; j < k; ++j)
        if (g.pow(-j) * rho * g.pow(k) * pi == pi2) out.push_back({j, k, rho});
  return out;
}

ChainReport chain_property(const Structure& A, const Permutation& pi, const Permutation& pi2) {
  int n = pi.size();
  ChainReport rep;
  auto fail = [&](const std::string& s) {
    rep.ok = false;
    rep.failed = s;
    return rep;
  };
  auto holds = [&](const char* R, const Permutation& s, int mid, int ones) {
    return A.truth(A.sig.relation_index(R), hard_tuple(s, mid, ones)) == Truth::True;
  };
  int wp = permutation_rank(pi) + 1, q0 = const_elem(n);
  if (!holds("P", pi, q0, 0)) return fail("P");
  if (!holds("W", pi, wp, 0)) return fail("W");
  // The templates act on the right, so pi^-1 pi2 must be gamma^k rho gamma^-j. Reversing
  // 1..n-1 (fixing n) swaps gamma with its inverse; inverting then gives the lemma's shape
  // with pi = identity, and the lemma's triple translates back.
  Permutation s = Permutation::identity(n);
  for (int i = 1; i < n; ++i) s.img[i - 1] = n - i;
  Permutation target = s * pi2.inverse() * pi * s;
  auto d = decompose_permutation(Permutation::identity(n), target);
  if (!d) return fail("decomposition");
  rep.j = d->j;
  rep.k = d->k;
  Permutation rho = s * d->rho.inverse() * s;
  Permutation g = Permutation::gamma(n);
  if (pi * g.pow(d->k) * rho * g.pow(-d->j) != pi2) throw std::logic_error("chain_property: bridge mismatch");
  for (int k = 1; k <= d->k; ++k)
    if (!holds("Cr", pi * g.pow(k), wp, k)) return fail("Cr at " + std::to_string(k));
  Permutation st = pi * g.pow(d->k) * rho;
  if (!holds("S", st, wp, d->k)) return fail("S");
  for (int j = 0; j <= d->j; ++j)
    if (!holds("Cl", st * g.pow(-j), wp, d->k - j)) return fail("Cl at " + std::to_string(j));
  for (int m = d->k - d->j - 1; m >= 0; --m)
    if (!holds("Z", pi2, wp, m)) return fail("Z at " + std::to_string(m));
  if (holds("W", pi2, wp, 0)) return fail("W at the end");
  return rep;
}

}  // namespace maslov
