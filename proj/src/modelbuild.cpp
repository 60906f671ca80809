#include "maslov/modelbuild.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "maslov/search.hpp"

namespace maslov {

namespace {

bool after_eloisa(const SatGame& g, const Position& p) {
  return p.t >= 1 && p.t <= g.M() && g.quantifier(g.K() + p.t - 1) == Op::Exists;
}

// Copies the atoms of type c whose unnamed set is all of [c.unnamed] onto elements s.
void copy_full(Structure& A, const Structure& c, const std::vector<int>& s) {
  size_t g = s.size();
  for (int r = 0; r < c.sig.num_relations(); ++r) {
    const TupleSet& ts = c.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple u = ts.at(x);
      if (unnamed_set(u).size() != g) continue;
      for (int& v : u)
        if (v > 0) v = s[v - 1];
      A.rels[r].insert(u);
    }
  }
}

std::vector<std::vector<Tuple>> ground_atoms(const Structure& S) {
  std::vector<std::vector<Tuple>> out(S.sig.num_relations());
  for (int r = 0; r < S.sig.num_relations(); ++r) {
    const TupleSet& ts = S.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple u = ts.at(x);
      if (unnamed_set(u).empty()) out[r].push_back(u);
    }
    std::sort(out[r].begin(), out[r].end());
  }
  return out;
}

template <class F>
void for_each_bit(const uint64_t* row, int words, int n, F fn) {
  for (int w = 0; w < words; ++w) {
    uint64_t x = row[w];
    while (x) {
      int v = w * 64 + __builtin_ctzll(x);
      x &= x - 1;
      if (v < n) fn(v);
    }
  }
}

}  // namespace

bool position_equiv(const SatGame& g, const Position& a, const Position& b) {
  if (!after_eloisa(g, a) || !after_eloisa(g, b))
    throw std::invalid_argument("position_equiv: positions must follow an Eloisa round");
  if (a.t != b.t || a.k() != b.k() || a.f != b.f) return false;
  int ys = g.K() + a.t - 1;
  int y = a.f[ys];
  if (one_type_of(a.L, y).key() != one_type_of(b.L, y).key()) return false;
  for (size_t i = 0; i < g.atoms().size(); ++i) {
    auto& sl = g.atom_slots()[i];
    if (sl.empty() || sl.back() != ys) continue;
    if (g.atom_truth(a, g.atoms()[i]) != g.atom_truth(b, g.atoms()[i])) return false;
  }
  return true;
}

PositionColours position_colours(const SatGame& g, const StrategyTable& w) {
  PositionColours pc;
  pc.positions = g.eloisa_positions(w);
  pc.colour_of.assign(pc.positions.size(), -1);
  std::map<std::pair<int, std::vector<int>>, std::vector<int>> by_f;  // (t, f) -> colours
  std::set<std::vector<int>> fs;
  for (size_t i = 0; i < pc.positions.size(); ++i) {
    const Position& p = pc.positions[i];
    fs.insert(p.f);
    auto& cands = by_f[{p.t, p.f}];
    int found = -1;
    for (int c : cands)
      if (position_equiv(g, pc.rep(c), p)) {
        found = c;
        break;
      }
    if (found < 0) {
      found = pc.size();
      pc.members.push_back({});
      cands.push_back(found);
    }
    pc.members[found].push_back(static_cast<int>(i));
    pc.colour_of[i] = found;
  }
  pc.assignments = fs.size();
  std::set<std::string> distinct;
  for (auto& a : g.atoms()) distinct.insert(to_string(g.prenex().formula, a));
  pc.bound = static_cast<double>(pc.assignments) * static_cast<double>(g.index().ones.size()) *
             std::pow(2.0, static_cast<double>(distinct.size()));
  if (pc.size() > pc.bound) throw std::logic_error("position_colours: more colours than the bound allows");
  return pc;
}

std::optional<SelfDomination> find_properly_self_dominating(const ColourfulView& T, const std::vector<int>& B,
                                                            const std::vector<Position>& reps, int K, int max_size) {
  int n = static_cast<int>(B.size());
  if (n < 2 || n > max_size) throw std::invalid_argument("find_properly_self_dominating: |B| out of range");
  if (std::set<int>(B.begin(), B.end()).size() != B.size())
    throw std::invalid_argument("find_properly_self_dominating: repeated vertex");
  int bi = -1;
  for (int i = 0; i < n && bi < 0; ++i) {
    bool dom = true;
    for (int j = 0; j < n && dom; ++j)
      if (j != i && !T.arc(B[i], B[j])) dom = false;
    if (dom) bi = i;
  }
  if (bi < 0) return std::nullopt;
  int b = B[bi];
  const Position& rho = reps.at(T.mu(b));
  int ys = K + rho.t - 1;
  SelfDomination sd{b, B, std::vector<int>(n)};
  std::set<int> images;
  for (int i = 0; i < n; ++i) {
    int s = i == bi ? ys : T.lambda(b, B[i]);
    if (s < 0 || s >= static_cast<int>(rho.f.size())) return std::nullopt;
    int e = rho.f[s];
    if (e <= 0 || !images.insert(e).second) return std::nullopt;
    sd.g[i] = s;
  }
  return sd;
}

BuildReport build_model(const SatGame& g, const PositionColours& pc, const ColourfulTournament& T,
                        const BuildOptions& opt) {
  if (T.num_r() != pc.size() || T.num_q() != g.slots())
    throw std::invalid_argument("build_model: tournament colours do not match (R = colours, Q = slots)");
  if (opt.verify_tournament) {
    auto rep = verify_paradoxical(T, opt.jobs);
    if (!rep.pass) throw std::invalid_argument("build_model: tournament is not paradoxical: " + rep.describe());
  }
  const TypeIndex& ix = g.index();
  const Signature& sig = g.beta().sig;
  int N = T.size(), K = g.K();
  BuildReport out;
  out.colours = pc.size();
  Structure A(sig, N, true);

  // Stage 1: each vertex takes the 1-type its colour's representative gives y_t.
  std::vector<int> one_of(N);
  std::vector<std::vector<Tuple>> ground;
  bool have_ground = false;
  for (int v = 0; v < N; ++v) {
    const Position& rho = pc.rep(T.mu(v));
    one_of[v] = rho.ones[rho.f[K + rho.t - 1] - 1];
    const Structure& one = ix.ones[one_of[v]];
    auto gr = ground_atoms(one);
    if (!have_ground) {
      ground = gr;
      have_ground = true;
      for (int r = 0; r < sig.num_relations(); ++r)
        for (auto& t : gr[r]) A.rels[r].insert(t);
    } else if (gr != ground) {
      throw std::logic_error("build_model: 1-types disagree on constants");
    }
    copy_full(A, one, {v + 1});
  }

  int max_s = std::min(g.slots(), sig.max_arity());
  if (max_s >= 2) {
    if (std::pow(static_cast<double>(N + 1), max_s) > 1.8e19)
      throw ResourceGuard("build_model: subset keys overflow 64 bits");
    auto key_of = [&](std::vector<int> s) {
      std::sort(s.begin(), s.end());
      uint64_t k = 0;
      for (int e : s) k = k * (N + 1) + static_cast<uint64_t>(e);
      return k;
    };
    std::unordered_set<uint64_t> assigned;
    uint64_t visited = 0;
    auto guard = [&] {
      if (++visited > opt.max_subsets) throw ResourceGuard("build_model: subset enumeration exceeds max_subsets");
    };

    // Stage 2: properly self-dominating sets, grouped by their dominator.
    for (int b = 0; b < N; ++b) {
      int col = T.mu(b);
      const Position& rho = pc.rep(col);
      int ys = K + rho.t - 1;
      int fb = rho.f[ys];
      std::vector<int> labels;
      std::map<int, std::vector<int>> succ;
      for (int s = 0; s < static_cast<int>(rho.f.size()); ++s)
        if (s != ys && rho.f[s] > 0 && rho.f[s] != fb) labels.push_back(s);
      if (labels.empty()) continue;
      for_each_bit(T.successors(b), T.words(), N, [&](int a) {
        int s = T.lambda(b, a);
        if (std::binary_search(labels.begin(), labels.end(), s)) succ[s].push_back(a);
      });
      std::vector<int> chosen_slots, chosen_v;
      std::set<int> used_images{fb};
      auto emit = [&] {
        guard();
        std::vector<int> verts{b}, slots{ys};
        verts.insert(verts.end(), chosen_v.begin(), chosen_v.end());
        slots.insert(slots.end(), chosen_slots.begin(), chosen_slots.end());
        const Position* star = nullptr;
        for (int m : pc.members[col]) {
          const Position& P = pc.positions[m];
          bool ok = true;
          for (size_t i = 0; i < verts.size() && ok; ++i)
            if (P.ones[P.f[slots[i]] - 1] != one_of[verts[i]]) ok = false;
          if (ok) {
            star = &P;
            break;
          }
        }
        if (!star) {
          ++out.stage2_unmatched;
          return;
        }
        std::vector<int> img, elems;
        for (size_t i = 0; i < verts.size(); ++i) {
          img.push_back(star->f[slots[i]]);
          elems.push_back(verts[i] + 1);
        }
        if (!assigned.insert(key_of(elems)).second)
          throw std::logic_error("build_model: subset assigned twice in Stage 2");
        copy_full(A, hull_type_of(star->L, img), elems);
        ++out.stage2_sets;
      };
      // Choose labels in increasing slot order, one successor per label.
      auto rec = [&](auto&& self, size_t from) -> void {
        if (!chosen_v.empty()) emit();
        if (static_cast<int>(chosen_v.size()) + 1 >= max_s) return;
        for (size_t li = from; li < labels.size(); ++li) {
          int s = labels[li];
          auto it = succ.find(s);
          if (it == succ.end() || used_images.count(rho.f[s])) continue;
          used_images.insert(rho.f[s]);
          chosen_slots.push_back(s);
          for (int a : it->second) {
            chosen_v.push_back(a);
            self(self, li + 1);
            chosen_v.pop_back();
          }
          chosen_slots.pop_back();
          used_images.erase(rho.f[s]);
        }
      };
      rec(rec, 0);
    }

    // Stage 3: any outer-type with the right 1-types on every remaining subset.
    double total = 0;
    for (int s = 2; s <= max_s; ++s) {
      double c = 1;
      for (int i = 0; i < s; ++i) c = c * (N - i) / (i + 1);
      total += c;
    }
    if (total + static_cast<double>(visited) > static_cast<double>(opt.max_subsets))
      throw ResourceGuard("build_model: Stage 3 would enumerate more than max_subsets sets");
    std::map<std::vector<int>, const Structure*> cache;
    for (int s = 2; s <= std::min(max_s, N); ++s) {
      std::vector<int> pick(s);
      for (int i = 0; i < s; ++i) pick[i] = i + 1;
      while (true) {
        if (!assigned.count(key_of(pick))) {
          std::vector<int> ids(s);
          for (int i = 0; i < s; ++i) ids[i] = one_of[pick[i] - 1];
          auto it = cache.find(ids);
          if (it == cache.end()) {
            auto bt = ix.by_ones.find(ids);
            if (bt == ix.by_ones.end() || bt->second.empty())
              throw std::logic_error("build_model: no outer-type over the required 1-types");
            it = cache.emplace(ids, bt->second.front()).first;
          }
          copy_full(A, *it->second, pick);
          ++out.stage3_sets;
        }
        int i = s - 1;
        while (i >= 0 && pick[i] == N - s + i + 1) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
  }
  out.verified = model_check(A, g.prenex().formula, {}, opt.jobs);
  out.model = std::move(A);
  return out;
}

WitnessChainGrid make_grid(const ColourfulTournament& base, int num_r, int k, int num_exists) {
  int rows = k + 1, cols = num_exists;
  if (cols < 1 || k < 1) throw std::invalid_argument("make_grid: need k >= 1 and at least one existential");
  if (base.num_r() != num_r * rows * cols || base.num_q() != k)
    throw std::invalid_argument("make_grid: base must have R x [k+1] x [M] vertex colours and k arc colours");
  int N = base.size();
  WitnessChainGrid grid;
  grid.rows = rows;
  grid.cols = cols;
  grid.cells.assign(rows, std::vector<std::vector<int>>(cols));
  grid.tournament = ColourfulTournament(N, num_r, k + cols);
  std::vector<int> row(N), colm(N);
  for (int v = 0; v < N; ++v) {
    int c = base.mu(v);
    colm[v] = c % cols;
    row[v] = c / cols % rows;
    grid.tournament.set_mu(v, c / cols / rows);
    grid.cells[row[v]][colm[v]].push_back(v);
  }
  for (int u = 0; u < N; ++u)
    for (int v = u + 1; v < N; ++v) {
      if (row[u] == row[v] && colm[u] != colm[v]) {
        int hi = colm[u] > colm[v] ? u : v, lo = hi == u ? v : u;
        grid.tournament.set_arc(hi, lo, k + colm[lo]);
      } else if (base.arc(u, v)) {
        grid.tournament.set_arc(u, v, base.lambda(u, v));
      } else {
        grid.tournament.set_arc(v, u, base.lambda(v, u));
      }
    }
  return grid;
}

bool check_witness_chains(const WitnessChainGrid& grid, int k) {
  const auto& T = grid.tournament;
  for (int i = 0; i < grid.rows; ++i)
    for (int j = 0; j < grid.cols; ++j)
      for (int jp = 0; jp < j; ++jp)
        for (int a : grid.cells[i][j])
          for (int b : grid.cells[i][jp])
            if (!T.arc(a, b) || T.lambda(a, b) != k + jp) return false;
  return true;
}

ParamShape param_shape(const SatGame& g) {
  ParamShape sh;
  sh.k = g.K();
  bool seen_exists = false;
  for (auto& b : g.prenex().word) {
    if (b.q == Op::Exists) {
      seen_exists = true;
      ++sh.num_exists;
    } else if (seen_exists) {
      throw std::invalid_argument("param_shape: a universal follows an existential");
    } else {
      ++sh.k;
    }
  }
  if (sh.num_exists == 0) throw std::invalid_argument("param_shape: no existential variable");
  return sh;
}

ParamReport build_model_param_skolem(const SatGame& g, const PositionColours& pc, const ColourfulTournament& base,
                                     const BuildOptions& opt) {
  ParamShape sh = param_shape(g);
  ParamReport rep;
  rep.base_check = verify_paradoxical(base, opt.jobs);
  if (!rep.base_check.pass)
    throw std::invalid_argument("build_model_param_skolem: base is not paradoxical: " + rep.base_check.describe());
  rep.grid = make_grid(base, pc.size(), sh.k, sh.num_exists);
  rep.chains_ok = check_witness_chains(rep.grid, sh.k);
  BuildOptions inner = opt;
  inner.verify_tournament = false;
  rep.build = build_model(g, pc, rep.grid.tournament, inner);
  return rep;
}

PipelineReport run_pipeline(const Formula& phi, const PipelineOptions& opt) {
  PipelineReport rep;
  auto stop = [&](const std::string& stage, const std::string& why) {
    rep.stage = stage;
    rep.detail = why;
    return rep;
  };
  Classification cls = classify(phi);
  if (!cls.has(FragClass::Kbar)) return stop("classify", "not in the class");
  Prenex pre = to_prenex(phi, true);
  rep.K = pre.K();
  rep.M = pre.M();
  int G = rep.K + rep.M;

  SearchResult sr = bounded_model_search(phi, opt.max_search, opt.budget);
  if (sr.verdict != SearchVerdict::Sat) return stop("search", "no model up to the search bound");
  rep.search_size = sr.model.unnamed;

  OuterTypeSet beta = extract_type_set(augment(sr.model, G), G);
  rep.beta_members = beta.size();
  SatGame game(pre, beta);
  rep.beta_ones = game.index().ones.size();
  GameResult gr = game.solve(opt.budget);
  rep.verdict = gr.verdict;
  if (gr.verdict != GameVerdict::EloisaWins) return stop("game", verdict_name(gr.verdict));

  PositionColours pc = position_colours(game, gr.strategy);
  rep.colours = pc.size();

  BuildOptions bo;
  bo.jobs = opt.jobs;
  BuildReport br;
  try {
    if (opt.param) {
      ParamShape sh = param_shape(game);
      int num_r = pc.size() * (sh.k + 1) * sh.num_exists;
      SampleResult s = sample_paradoxical(num_r, sh.k, opt.seed, 4, 0, 32, opt.jobs);
      rep.sample_attempts = s.attempts;
      if (!s.tournament) return stop("tournament", "no paradoxical base tournament found");
      ParamReport pr = build_model_param_skolem(game, pc, *s.tournament, bo);
      if (!pr.chains_ok) return stop("grid", "witness chains broken");
      rep.grid = true;
      br = std::move(pr.build);
    } else {
      SampleResult s = sample_paradoxical(pc.size(), G, opt.seed, 4, 0, 32, opt.jobs);
      rep.sample_attempts = s.attempts;
      if (!s.tournament) return stop("tournament", "no paradoxical tournament found");
      bo.verify_tournament = false;  // the sampler has just verified it
      br = build_model(game, pc, *s.tournament, bo);
    }
  } catch (const ResourceGuard& e) {
    return stop("build", e.what());
  }
  rep.vertices = br.model.unnamed;
  rep.verified = br.verified && model_check(br.model, phi, {}, opt.jobs);
  rep.model = std::move(br.model);
  if (!rep.verified) return stop("verify", "constructed structure does not satisfy the sentence");
  rep.ok = true;
  rep.stage = "done";
  return rep;
}

}  // namespace maslov
