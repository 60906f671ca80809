#include "maslov/tournaments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace maslov {

ColourfulTournament::ColourfulTournament(int n, int num_r, int num_q)
    : n_(n), num_r_(num_r), num_q_(num_q), words_((n + 63) / 64) {
  out_.assign(static_cast<size_t>(n) * words_, 0);
  in_.assign(static_cast<size_t>(n) * words_, 0);
  mu_.assign(n, 0);
  label_.assign(static_cast<size_t>(n) * n, 0);
}

void ColourfulTournament::set_arc(int u, int v, int label) {
  if (u == v) throw std::invalid_argument("tournament: self-loop");
  out_[static_cast<size_t>(v) * words_ + u / 64] &= ~(uint64_t{1} << (u % 64));
  in_[static_cast<size_t>(u) * words_ + v / 64] &= ~(uint64_t{1} << (v % 64));
  out_[static_cast<size_t>(u) * words_ + v / 64] |= uint64_t{1} << (v % 64);
  in_[static_cast<size_t>(v) * words_ + u / 64] |= uint64_t{1} << (u % 64);
  label_[static_cast<size_t>(u) * n_ + v] = label;
}

ColourfulTournament materialize(const ColourfulView& v) {
  int n = v.size();
  ColourfulTournament t(n, v.num_r(), v.num_q());
  for (int a = 0; a < n; ++a) {
    t.set_mu(a, v.mu(a));
    for (int b = a + 1; b < n; ++b) {
      if (v.arc(a, b))
        t.set_arc(a, b, v.lambda(a, b));
      else
        t.set_arc(b, a, v.lambda(b, a));
    }
  }
  return t;
}

bool is_tournament(const ColourfulView& t) {
  int n = t.size();
  for (int a = 0; a < n; ++a) {
    if (t.arc(a, a)) return false;
    for (int b = a + 1; b < n; ++b)
      if (t.arc(a, b) == t.arc(b, a)) return false;
  }
  return true;
}

bool colourfully_dominates(const ColourfulView& t, int b, const std::vector<int>& a, int r,
                           const std::vector<int>& q) {
  if (static_cast<int>(a.size()) != t.num_q() || q.size() != a.size())
    throw std::invalid_argument("colourfully_dominates: tuple length differs from |Q|");
  if (t.mu(b) != r) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b || !t.arc(b, a[i]) || t.lambda(b, a[i]) != q[i]) return false;
  }
  return true;
}

std::string ParadoxReport::describe() const {
  if (pass) return "pass (" + std::to_string(tuples_checked) + " tuples)";
  std::string s = "no vertex dominates a=<";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  s += "> via r=" + std::to_string(r) + ", q=<";
  for (size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s + ">";
}

namespace {

// Decodes signature index into (r, q) with q_1 least significant.
void decode(uint64_t sig, int num_q, int ell, int& r, std::vector<int>& q) {
  q.assign(ell, 0);
  for (int i = 0; i < ell; ++i) {
    q[i] = static_cast<int>(sig % num_q);
    sig /= num_q;
  }
  r = static_cast<int>(sig);
}

struct SetChecker {
  const ColourfulTournament& t;
  int ell, W;
  uint64_t need;
  std::vector<int> a;
  std::vector<std::vector<uint64_t>> cand;  // per depth
  uint64_t checked = 0;

  SetChecker(const ColourfulTournament& tt, uint64_t nd)
      : t(tt), ell(tt.num_q()), W(tt.words()), need(nd), a(ell), cand(ell + 1, std::vector<uint64_t>(W, ~0ull)) {
    int n = t.size();
    if (n % 64) cand[0][W - 1] = (uint64_t{1} << (n % 64)) - 1;
  }

  uint64_t popcount(const std::vector<uint64_t>& v) const {
    uint64_t c = 0;
    for (uint64_t w : v) c += std::popcount(w);
    return c;
  }

  // Fills the failing triple for the completed tuple a (sets a in increasing order).
  bool fail_on(ParadoxReport& rep) {
    std::vector<uint64_t> c = cand[0];
    for (int x : a)
      for (int w = 0; w < W; ++w) c[w] &= t.dominators(x)[w];
    std::vector<char> hit(need, 0);
    for (int w = 0; w < W; ++w)
      for (uint64_t bits = c[w]; bits; bits &= bits - 1) {
        int b = w * 64 + std::countr_zero(bits);
        uint64_t s = t.mu(b);
        for (int i = ell - 1; i >= 0; --i) s = s * t.num_q() + t.lambda(b, a[i]);
        hit[s] = 1;
      }
    for (uint64_t s = 0; s < need; ++s)
      if (!hit[s]) {
        rep.pass = false;
        rep.a = a;
        decode(s, t.num_q(), ell, rep.r, rep.q);
        return true;
      }
    return false;
  }

  // Completes a[0..d) with the least unused vertices above a[d-1] if possible, else any unused.
  void complete(int d) {
    int n = t.size();
    for (int i = d; i < ell; ++i) {
      for (int v = 0; v < n; ++v)
        if (std::find(a.begin(), a.begin() + i, v) == a.begin() + i) {
          a[i] = v;
          break;
        }
    }
    std::sort(a.begin(), a.end());
  }

  // Depth-first over increasing tuples; returns true on failure.
  bool dfs(int d, int from, ParadoxReport& rep) {
    int n = t.size();
    if (d == ell) {
      ++checked;
      return fail_on(rep);
    }
    for (int v = from; v <= n - (ell - d); ++v) {
      a[d] = v;
      for (int w = 0; w < W; ++w) cand[d + 1][w] = cand[d][w] & t.dominators(v)[w];
      if (popcount(cand[d + 1]) < need) {
        complete(d + 1);
        ++checked;
        if (fail_on(rep)) return true;
        a[d] = v;
        continue;
      }
      if (dfs(d + 1, v + 1, rep)) return true;
    }
    return false;
  }
};

}  // namespace

ParadoxReport verify_paradoxical(const ColourfulTournament& t, int jobs) {
  int n = t.size(), ell = t.num_q();
  if (n < ell) throw std::invalid_argument("verify_paradoxical: fewer vertices than arc colours");
  double needd = t.num_r() * std::pow(static_cast<double>(t.num_q()), ell);
  ParadoxReport rep;
  if (needd > n) {
    // Pigeonhole: the dominators of one tuple via distinct (r, q) are distinct vertices.
    SetChecker sc(t, 0);
    sc.complete(0);
    rep.pass = false;
    rep.a = sc.a;
    std::vector<uint64_t> c = sc.cand[0];
    for (int x : sc.a)
      for (int w = 0; w < t.words(); ++w) c[w] &= t.dominators(x)[w];
    // Find a concrete missing signature by scanning signatures in order.
    uint64_t total = static_cast<uint64_t>(needd);
    for (uint64_t s = 0; s < total; ++s) {
      int r;
      std::vector<int> q;
      decode(s, t.num_q(), ell, r, q);
      bool found = false;
      for (int b = 0; b < n && !found; ++b) found = colourfully_dominates(t, b, sc.a, r, q);
      if (!found) {
        rep.r = r;
        rep.q = q;
        break;
      }
    }
    rep.tuples_checked = 1;
    return rep;
  }
  uint64_t need = static_cast<uint64_t>(needd);
  jobs = std::max(1, std::min(jobs, n));
  std::atomic<int> next{0};
  std::atomic<int> best{n};
  std::atomic<uint64_t> checked{0};
  std::vector<ParadoxReport> found(n);
  auto work = [&] {
    SetChecker sc(t, need);
    for (int v; (v = next++) <= n - ell;) {
      if (v > best) break;
      sc.a[0] = v;
      for (int w = 0; w < t.words(); ++w) sc.cand[1][w] = sc.cand[0][w] & t.dominators(v)[w];
      ParadoxReport r;
      bool bad;
      if (ell == 1 || sc.popcount(sc.cand[1]) < need) {
        sc.complete(1);
        ++sc.checked;
        bad = sc.fail_on(r);
      } else {
        bad = sc.dfs(1, v + 1, r);
      }
      if (bad) {
        found[v] = r;
        int cur = best;
        while (v < cur && !best.compare_exchange_weak(cur, v)) {
        }
      }
    }
    checked += sc.checked;
  };
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (best < n) rep = found[best];
  rep.tuples_checked = checked;
  return rep;
}

ParadoxReport spot_check_paradoxical(const ColourfulView& t, int samples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  int n = t.size(), ell = t.num_q();
  ParadoxReport rep;
  if (n < ell) throw std::invalid_argument("spot_check_paradoxical: fewer vertices than arc colours");
  for (int s = 0; s < samples; ++s) {
    std::vector<int> a;
    while (static_cast<int>(a.size()) < ell) {
      int v = static_cast<int>(rng() % n);
      if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
    }
    int r = static_cast<int>(rng() % t.num_r());
    std::vector<int> q(ell);
    for (int& x : q) x = static_cast<int>(rng() % t.num_q());
    bool ok = false;
    for (int b = 0; b < n && !ok; ++b) ok = colourfully_dominates(t, b, a, r, q);
    ++rep.tuples_checked;
    if (!ok) {
      rep.pass = false;
      rep.a = a;
      rep.r = r;
      rep.q = q;
      return rep;
    }
  }
  return rep;
}

namespace {

ColourfulTournament random_arcs(ColourfulTournament t, std::mt19937_64& rng) {
  int n = t.size();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      bool fwd = rng() & 1;
      int label = static_cast<int>(rng() % t.num_q());
      if (fwd)
        t.set_arc(u, v, label);
      else
        t.set_arc(v, u, label);
    }
  return t;
}

}  // namespace

ColourfulTournament sample_random(int num_r, int num_q, int n, uint64_t seed) {
  if (n < num_q) throw std::invalid_argument("sample_random: n below the number of arc colours");
  std::mt19937_64 rng(seed);
  ColourfulTournament t(num_r * n, num_r, num_q);
  for (int r = 0; r < num_r; ++r)
    for (int i = 0; i < n; ++i) t.set_mu(r * n + i, r);
  return random_arcs(std::move(t), rng);
}

ColourfulTournament sample_random_vertices(int nv, int num_r, int num_q, uint64_t seed) {
  std::mt19937_64 rng(seed);
  ColourfulTournament t(nv, num_r, num_q);
  for (int v = 0; v < nv; ++v) t.set_mu(v, static_cast<int>(rng() % num_r));
  return random_arcs(std::move(t), rng);
}

int default_sample_n(int num_r, int num_q) {
  double ell = num_q;
  double v = 10.0 * std::pow(2 * ell, ell + 1) * (std::log(static_cast<double>(num_r)) + ell * std::max(0.0, std::log(ell)));
  return std::max(num_q, static_cast<int>(std::ceil(v)));
}

SampleResult sample_paradoxical(int num_r, int num_q, uint64_t seed, int start_n, int max_n, int max_attempts,
                                int jobs) {
  int def = default_sample_n(num_r, num_q);
  if (start_n <= 0) start_n = def;
  if (max_n <= 0) max_n = std::max(start_n, def);
  start_n = std::max(start_n, num_q);
  SampleResult res;
  int n = start_n;
  for (int i = 0; i < max_attempts; ++i) {
    ColourfulTournament t = sample_random(num_r, num_q, n, seed + i);
    res.attempts = i + 1;
    if (verify_paradoxical(t, jobs).pass) {
      res.tournament = std::move(t);
      res.n = n;
      return res;
    }
    n = std::min(max_n, n * 2);
  }
  return res;
}

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(uint64_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_qr(uint64_t a, uint64_t p) {
  a %= p;
  return a != 0 && powmod(a, (p - 1) / 2, p) == 1;
}

PaleyTournament::PaleyTournament(uint64_t p) : p_(p) {
  if (!is_prime(p)) throw std::invalid_argument("Paley: " + std::to_string(p) + " is not prime");
  if (p % 4 != 3) throw std::invalid_argument("Paley: " + std::to_string(p) + " is not 3 mod 4");
}

bool PaleyTournament::arc(int u, int v) const {
  if (u == v) return false;
  uint64_t d = (static_cast<uint64_t>(u) + p_ - static_cast<uint64_t>(v)) % p_;
  return is_qr(d, p_);
}

ColourfulTournament build_paley(uint64_t p) {
  if (p > 20000) throw std::invalid_argument("build_paley: materializing p > 20000 is refused");
  return materialize(PaleyTournament(p));
}

ExtensionReport verify_k_extension(const ColourfulTournament& t, int k) {
  int n = t.size(), W = t.words();
  ExtensionReport rep;
  std::vector<int> S;
  std::vector<uint64_t> all(W, ~0ull);
  if (n % 64) all[W - 1] = (uint64_t{1} << (n % 64)) - 1;
  if (n == 0) {
    rep.pass = false;
    return rep;
  }
  // For a chosen set S, try every split into A (dominated by b) and C (dominating b).
  std::function<bool(int)> rec = [&](int from) -> bool {
    int s = static_cast<int>(S.size());
    for (uint32_t mask = 0; mask < (1u << s); ++mask) {
      std::vector<uint64_t> c = all;
      for (int i = 0; i < s; ++i) {
        const uint64_t* row = (mask >> i & 1) ? t.successors(S[i]) : t.dominators(S[i]);
        for (int w = 0; w < W; ++w) c[w] &= row[w];
      }
      bool any = false;
      for (uint64_t w : c) any = any || w;
      if (!any) {
        rep.pass = false;
        for (int i = 0; i < s; ++i) ((mask >> i & 1) ? rep.C : rep.A).push_back(S[i]);
        return false;
      }
    }
    if (s == k) return true;
    for (int v = from; v < n; ++v) {
      S.push_back(v);
      bool ok = rec(v + 1);
      S.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  rec(0);
  return rep;
}

uint64_t repr(const std::vector<int>& a, int b, const ColourfulView& t) {
  uint64_t n = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b) throw std::invalid_argument("repr: b occurs in the tuple");
    if (t.arc(a[i], b)) n |= uint64_t{1} << i;
  }
  return n;
}

int paley_k(int t, int m) { return t + m + (1 << ((1 << t) - 1)) * (1 << t); }

uint64_t paley_prime_for(int k, uint64_t max_p) {
  if (2 * k >= 62) return 0;
  uint64_t lo = static_cast<uint64_t>(k) * k;
  if (lo > (max_p >> (2 * k))) return 0;
  lo <<= 2 * k;
  for (uint64_t p = lo; p <= max_p; ++p)
    if (p % 4 == 3 && is_prime(p)) return p;
  return 0;
}

PaleyColourful::PaleyColourful(uint64_t p, int t, int m) : base_(p) {
  if (t < 1 || m < 1) throw std::invalid_argument("PaleyColourful: t and m must be at least 1");
  dec_.p = p;
  dec_.t = t;
  dec_.m = m;
  dec_.k = paley_k(t, m);
  for (int i = 0; i < t; ++i) dec_.control_bit.push_back(i);
  for (int i = 0; i < m; ++i) dec_.control_mu.push_back(t + i);
  int nc = 1 << t;
  std::vector<std::vector<int>> by_repr(nc);
  for (uint64_t x = t + m; x < p; ++x) {
    int v = static_cast<int>(x);
    by_repr[repr(dec_.control_bit, v, base_)].push_back(v);
  }
  std::vector<int> order(nc);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return by_repr[a].size() < by_repr[b].size(); });
  for (int i : order) {
    dec_.classes.push_back(std::move(by_repr[i]));
    dec_.class_repr.push_back(i);
  }
  dec_.n_star = dec_.class_repr[0];
  // Greedy maximal chain table: the i-th vertex of C_1 takes the i-th vertex of each class.
  for (size_t i = 0; i < dec_.classes[0].size(); ++i) {
    std::vector<int> tup;
    for (int j = 1; j < nc; ++j) tup.push_back(dec_.classes[j][i]);
    dec_.s.push_back(std::move(tup));
  }
}

bool PaleyColourful::arc(int u, int v) const { return base_.arc(vertex(u), vertex(v)); }

int PaleyColourful::mu(int v) const { return static_cast<int>(repr(dec_.control_mu, vertex(v), base_)); }

int PaleyColourful::lambda(int u, int v) const {
  return static_cast<int>(repr(dec_.s[v], vertex(u), base_));
}

PaleyColourful build_paley_colourful(int t, int m, uint64_t max_p) {
  if (t < 1 || m < 1) throw std::invalid_argument("build_paley_colourful: t and m must be at least 1");
  int k = paley_k(t, m);
  uint64_t p = paley_prime_for(k, max_p);
  if (p == 0) {
    std::string need = 2 * k < 62 ? std::to_string(static_cast<uint64_t>(k) * k << (2 * k))
                                  : std::to_string(k) + "^2 * 2^" + std::to_string(2 * k);
    throw ResourceGuard("build_paley_colourful: needs a prime p >= " + need + " (limit " + std::to_string(max_p) + ")");
  }
  return PaleyColourful(p, t, m);
}

}  // namespace maslov
