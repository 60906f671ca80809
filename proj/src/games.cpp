#include "maslov/games.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace maslov {

std::string Position::key() const {
  std::ostringstream os;
  os << t << '[';
  for (int e : f) os << e << ',';
  os << ']' << L.key();
  return os.str();
}

std::string verdict_name(GameVerdict v) {
  switch (v) {
    case GameVerdict::EloisaWins:
      return "eloisa";
    case GameVerdict::AbelardWins:
      return "abelard";
    case GameVerdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

const Position* StrategyTable::lookup(const Position& p) const {
  auto it = moves.find(p.key());
  return it == moves.end() ? nullptr : &it->second;
}

Structure add_element(const Structure& L, const Structure& one) {
  Structure out = L;
  int e = ++out.unnamed;
  out.defined.insert({e});
  for (int r = 0; r < one.sig.num_relations(); ++r) {
    const TupleSet& ts = one.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple u = ts.at(x);
      bool has = false;
      for (int& v : u)
        if (v > 0) v = e, has = true;
      if (has) out.rels[r].insert(u);
    }
  }
  return out;
}

void write_hull(Structure& L, const std::vector<int>& s, const Structure& c) {
  std::vector<int> key = s;
  std::sort(key.begin(), key.end());
  L.defined.insert(key);
  size_t g = s.size();
  for (int r = 0; r < c.sig.num_relations(); ++r) {
    const TupleSet& ts = c.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple u = ts.at(x);
      if (unnamed_set(u).size() != g) continue;
      for (int& v : u)
        if (v > 0) v = s[v - 1];
      L.rels[r].insert(u);
    }
  }
}

namespace {

OuterTypeSet normalized(OuterTypeSet b) {
  b.normalize();
  return b;
}

}  // namespace

SatGame::SatGame(const Prenex& pre, OuterTypeSet beta)
    : pre_(pre), beta_(normalized(std::move(beta))), ix_(beta_) {
  ClosureReport rep = check_closed(beta_, slots());
  if (!rep.ok())
    throw BetaNotClosed("type set not consistent and closed: " +
                        (rep.violations.empty() ? std::string("?") : rep.violations[0]));
  const Formula& f = pre_.formula;
  slot_of_var_.assign(f.var_names.size(), -1);
  std::vector<int> vars = pre_.vars();
  for (size_t i = 0; i < vars.size(); ++i) slot_of_var_[vars[i]] = static_cast<int>(i);
  for (int r = 0; r < f.sig.num_relations(); ++r) {
    int br = beta_.sig.relation_index(f.sig.rel_names[r]);
    if (br < 0 || beta_.sig.arities[br] != f.sig.arities[r])
      throw std::invalid_argument("type set lacks relation " + f.sig.rel_names[r]);
    rel_map_.push_back(br);
  }
  for (auto& c : f.sig.constants) {
    int bc = beta_.sig.constant_index(c);
    if (bc < 0) throw std::invalid_argument("type set lacks constant " + c);
    const_map_.push_back(bc);
  }
  collect_atoms(pre_.matrix, atoms_);
  for (auto& a : atoms_) {
    std::vector<int> s;
    for (auto& t : a->args)
      if (!t.is_const) s.push_back(slot_of_var_[t.id]);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    atom_slots_.push_back(s);
  }
  grade_.resize(beta_.max_grade + 1);
  for (auto& m : beta_.members) grade_[m.unnamed].push_back(&m);
}

int SatGame::slot_of_var(int var) const {
  return var >= 0 && var < static_cast<int>(slot_of_var_.size()) ? slot_of_var_[var] : -1;
}

Position SatGame::root() const {
  Position p;
  p.L = Structure(beta_.sig, 0, false);
  return p;
}

Player SatGame::mover(const Position& p) const {
  if (p.t < 0) return Player::Abelard;
  if (p.t >= M()) return Player::None;
  return quantifier(K() + p.t) == Op::Forall ? Player::Abelard : Player::Eloisa;
}

Truth SatGame::eval_atom(const Structure& S, const NodePtr& atom, const std::vector<int>& vals) const {
  int buf[64];
  std::vector<int> big;
  int* t = buf;
  size_t n = atom->args.size();
  if (n > 64) {
    big.resize(n);
    t = big.data();
  }
  for (size_t i = 0; i < n; ++i) {
    const Term& a = atom->args[i];
    if (a.is_const) {
      t[i] = const_elem(const_map_[a.id]);
    } else {
      int s = slot_of_var_[a.id];
      t[i] = s >= 0 && s < static_cast<int>(vals.size()) ? vals[s] : 0;
      if (t[i] == 0) return Truth::Undef;
    }
  }
  return S.truth(rel_map_[atom->rel], t);
}

Truth SatGame::atom_truth(const Position& p, const NodePtr& atom) const { return eval_atom(p.L, atom, p.f); }

bool SatGame::eval(const NodePtr& n, const Structure& L, const std::vector<int>& f) const {
  switch (n->op) {
    case Op::Atom: {
      Truth v = eval_atom(L, n, f);
      if (v == Truth::Undef) throw UndefinedAtom("matrix atom undefined at a final position");
      return v == Truth::True;
    }
    case Op::Not:
      return !eval(n->kids[0], L, f);
    case Op::And:
      for (auto& k : n->kids)
        if (!eval(k, L, f)) return false;
      return true;
    case Op::Or:
      for (auto& k : n->kids)
        if (eval(k, L, f)) return true;
      return false;
    case Op::Implies:
      return !eval(n->kids[0], L, f) || eval(n->kids[1], L, f);
    default:
      throw std::invalid_argument("quantifier inside the matrix");
  }
}

bool SatGame::eloisa_won(const Position& p) const { return eval(pre_.matrix, p.L, p.f); }

void SatGame::opening_moves(std::vector<Position>& out) const {
  int C = beta_.sig.num_constants();
  for (int k = 0; k <= K() && k < static_cast<int>(grade_.size()); ++k) {
    std::vector<int> vals;
    for (int e = 1; e <= k; ++e) vals.push_back(e);
    for (int c = 0; c < C; ++c) vals.push_back(const_elem(c));
    if (vals.empty()) continue;
    for (const Structure* m : grade_[k]) {
      std::vector<int> ones = ix_.one_ids(*m);
      std::vector<size_t> idx(K(), 0);
      while (true) {
        std::vector<int> f(K());
        std::vector<char> hit(k + 1, 0);
        for (int i = 0; i < K(); ++i) {
          f[i] = vals[idx[i]];
          if (f[i] > 0) hit[f[i]] = 1;
        }
        if (std::count(hit.begin() + 1, hit.end(), 1) == k) out.push_back(Position{0, *m, f, ones});
        int i = K() - 1;
        while (i >= 0 && ++idx[i] == vals.size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
}

void SatGame::abelard_moves(const Position& p, std::vector<Position>& out) const {
  for (size_t a = 0; a < ix_.ones.size(); ++a) {
    Position q{p.t + 1, add_element(p.L, ix_.ones[a]), p.f, p.ones};
    q.f.push_back(q.L.unnamed);
    q.ones.push_back(static_cast<int>(a));
    out.push_back(std::move(q));
  }
  std::vector<int> reuse;
  for (int e = 1; e <= p.k(); ++e) reuse.push_back(e);
  for (int c = 0; c < beta_.sig.num_constants(); ++c) reuse.push_back(const_elem(c));
  for (int e : reuse) {
    Position q{p.t + 1, p.L, p.f, p.ones};
    q.f.push_back(e);
    out.push_back(std::move(q));
  }
}

void SatGame::eloisa_moves(const Position& p, bool reduced, std::vector<Position>& out) const {
  int k = p.k(), e = k + 1, ys = K() + p.t;
  std::vector<int> f1 = p.f;
  f1.push_back(e);
  // Subsets of [k] to join with the new element, by size then lexicographic.
  std::vector<std::vector<int>> subsets;
  for (int size = 1; size <= k; ++size) {
    std::vector<int> pick(size);
    for (int i = 0; i < size; ++i) pick[i] = i + 1;
    while (true) {
      auto s = pick;
      s.push_back(e);
      subsets.push_back(s);
      int i = size - 1;
      while (i >= 0 && pick[i] == k - size + i + 1) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  // Atoms fixed by this move on each subset: y_{t+1} in them, all slots assigned, image = s.
  std::vector<std::vector<size_t>> relevant(subsets.size());
  if (reduced) {
    for (size_t a = 0; a < atoms_.size(); ++a) {
      auto& sl = atom_slots_[a];
      if (sl.empty() || sl.back() != ys) continue;
      std::vector<int> img;
      for (int s : sl)
        if (f1[s] > 0) img.push_back(f1[s]);
      std::sort(img.begin(), img.end());
      img.erase(std::unique(img.begin(), img.end()), img.end());
      for (size_t i = 0; i < subsets.size(); ++i)
        if (subsets[i] == img) relevant[i].push_back(a);
    }
  }
  for (size_t a = 0; a < ix_.ones.size(); ++a) {
    Structure L1 = add_element(p.L, ix_.ones[a]);
    std::vector<int> ones1 = p.ones;
    ones1.push_back(static_cast<int>(a));
    std::vector<std::vector<const Structure*>> cands(subsets.size());
    for (size_t i = 0; i < subsets.size(); ++i) {
      std::vector<int> seq;
      for (int x : subsets[i]) seq.push_back(ones1[x - 1]);
      auto it = ix_.by_ones.find(seq);
      if (it == ix_.by_ones.end()) throw BetaNotClosed("no outer-type extends a 1-type sequence");
      if (!reduced) {
        cands[i] = it->second;
        continue;
      }
      std::set<std::vector<char>> seen;
      for (const Structure* c : it->second) {
        std::vector<char> sig;
        for (size_t ai : relevant[i]) {
          std::vector<int> vals(f1.size(), 0);
          for (size_t s = 0; s < f1.size(); ++s) {
            if (f1[s] < 0) {
              vals[s] = f1[s];
            } else {
              auto pos = std::find(subsets[i].begin(), subsets[i].end(), f1[s]);
              if (pos != subsets[i].end()) vals[s] = static_cast<int>(pos - subsets[i].begin()) + 1;
            }
          }
          sig.push_back(eval_atom(*c, atoms_[ai], vals) == Truth::True);
        }
        if (seen.insert(sig).second) cands[i].push_back(c);
      }
    }
    std::vector<size_t> idx(subsets.size(), 0);
    while (true) {
      Position q{p.t + 1, L1, f1, ones1};
      for (size_t i = 0; i < subsets.size(); ++i) write_hull(q.L, subsets[i], *cands[i][idx[i]]);
      out.push_back(std::move(q));
      int i = static_cast<int>(subsets.size()) - 1;
      while (i >= 0 && ++idx[i] == cands[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
}

std::vector<Position> SatGame::legal_moves(const Position& p, bool reduced) const {
  std::vector<Position> out;
  switch (mover(p)) {
    case Player::None:
      break;
    case Player::Abelard:
      if (p.t < 0)
        opening_moves(out);
      else
        abelard_moves(p, out);
      break;
    case Player::Eloisa:
      eloisa_moves(p, reduced, out);
      break;
  }
  return out;
}

namespace {

struct OutOfBudget {};

}  // namespace

class Solver {
 public:
  Solver(const SatGame& g, uint64_t budget) : g_(g), budget_(budget) {}

  bool win(const Position& p) {
    std::string key = p.key();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (++nodes_ > budget_) throw OutOfBudget{};
    bool r;
    switch (g_.mover(p)) {
      case Player::None:
        r = g_.eloisa_won(p);
        break;
      case Player::Eloisa:
        r = false;
        for (auto& q : g_.legal_moves(p, true))
          if (win(q)) {
            r = true;
            break;
          }
        break;
      default:
        r = true;
        for (auto& q : g_.legal_moves(p, true))
          if (!win(q)) {
            r = false;
            break;
          }
        break;
    }
    memo_.emplace(std::move(key), r);
    return r;
  }

  void extract_strategy(StrategyTable& out) {
    std::vector<Position> stack{g_.root()};
    std::set<std::string> done;
    while (!stack.empty()) {
      Position p = std::move(stack.back());
      stack.pop_back();
      if (!done.insert(p.key()).second) continue;
      Player who = g_.mover(p);
      if (who == Player::None) continue;
      auto moves = g_.legal_moves(p, true);
      if (who == Player::Eloisa) {
        for (auto& q : moves)
          if (win(q)) {
            out.moves.emplace(p.key(), q);
            stack.push_back(q);
            break;
          }
      } else {
        for (auto it = moves.rbegin(); it != moves.rend(); ++it) stack.push_back(*it);
      }
    }
  }

  void extract_refutation(std::map<std::string, Position>& out, std::vector<Position>& line) {
    std::vector<Position> stack{g_.root()};
    std::set<std::string> done;
    while (!stack.empty()) {
      Position p = std::move(stack.back());
      stack.pop_back();
      if (!done.insert(p.key()).second) continue;
      Player who = g_.mover(p);
      if (who == Player::None) continue;
      auto moves = g_.legal_moves(p, true);
      if (who == Player::Abelard) {
        for (auto& q : moves)
          if (!win(q)) {
            out.emplace(p.key(), q);
            stack.push_back(q);
            break;
          }
      } else {
        for (auto it = moves.rbegin(); it != moves.rend(); ++it) stack.push_back(*it);
      }
    }
    Position p = g_.root();
    while (g_.mover(p) != Player::None) {
      if (g_.mover(p) == Player::Abelard) {
        p = out.at(p.key());
      } else {
        p = g_.legal_moves(p, true).front();
      }
      line.push_back(p);
    }
  }

  uint64_t nodes() const { return nodes_; }

 private:
  const SatGame& g_;
  uint64_t budget_, nodes_ = 0;
  std::unordered_map<std::string, bool> memo_;
};

GameResult SatGame::solve(uint64_t budget) const {
  GameResult res;
  Solver s(*this, budget);
  try {
    bool w = s.win(root());
    if (w) {
      res.verdict = GameVerdict::EloisaWins;
      s.extract_strategy(res.strategy);
    } else {
      res.verdict = GameVerdict::AbelardWins;
      s.extract_refutation(res.refute, res.line);
    }
  } catch (const OutOfBudget&) {
    res.verdict = GameVerdict::Unknown;
  }
  res.nodes = s.nodes();
  return res;
}

std::vector<Position> SatGame::eloisa_positions(const StrategyTable& w) const {
  std::vector<Position> out;
  std::set<std::string> seen, done;
  std::vector<Position> stack{root()};
  while (!stack.empty()) {
    Position p = std::move(stack.back());
    stack.pop_back();
    if (!done.insert(p.key()).second) continue;
    switch (mover(p)) {
      case Player::None:
        if (!eloisa_won(p)) throw std::invalid_argument("strategy loses at " + p.key());
        break;
      case Player::Eloisa: {
        const Position* q = w.lookup(p);
        if (!q) throw std::invalid_argument("strategy undefined at " + p.key());
        if (seen.insert(q->key()).second) out.push_back(*q);
        stack.push_back(*q);
        break;
      }
      case Player::Abelard: {
        auto moves = legal_moves(p);
        for (auto it = moves.rbegin(); it != moves.rend(); ++it) stack.push_back(std::move(*it));
        break;
      }
    }
  }
  return out;
}

bool type_equiv(const SatGame& g, const Structure& a1, const Structure& a2, const std::vector<int>& f) {
  if (!(a1.sig == a2.sig) || !(a1.sig == g.beta().sig)) throw std::invalid_argument("type_equiv: signature mismatch");
  if (a1.unnamed != 1 || a2.unnamed != 1) throw std::invalid_argument("type_equiv: not 1-types");
  int t = static_cast<int>(f.size()) - g.K();
  if (t < 1 || t > g.M() || g.quantifier(g.K() + t - 1) != Op::Exists)
    throw std::invalid_argument("type_equiv: assignment must end with an existential variable");
  int ys = g.K() + t - 1;
  std::vector<int> all_one(g.slots(), 1);
  for (auto& a : g.atoms())
    if (g.eval_atom(a1, a, all_one) != g.eval_atom(a2, a, all_one)) return false;
  for (size_t i = 0; i < g.atoms().size(); ++i) {
    auto& sl = g.atom_slots()[i];
    if (sl.empty() || sl.back() != ys) continue;
    bool cons = true;
    for (int s : sl)
      if (s != ys && f[s] > 0) cons = false;
    if (!cons) continue;
    std::vector<int> flat(f.size());
    for (size_t s = 0; s < f.size(); ++s) flat[s] = f[s] < 0 ? f[s] : 1;
    if (g.eval_atom(a1, g.atoms()[i], flat) != g.eval_atom(a2, g.atoms()[i], flat)) return false;
  }
  return true;
}

ReduceResult reduce_type_set(const SatGame& g, const StrategyTable& w, uint64_t budget) {
  ReduceResult res;
  const TypeIndex& ix = g.index();
  const OuterTypeSet& beta = g.beta();
  size_t n = ix.ones.size();
  res.ones_before = n;
  std::set<std::vector<int>> fs;
  for (auto& p : g.eloisa_positions(w)) fs.insert(p.f);
  res.assignments = fs.size();
  // reps[j][i]: least member of the class of 1-type i under the j-th assignment.
  std::vector<std::vector<int>> reps;
  for (auto& f : fs) {
    std::vector<int> rep(n);
    for (size_t i = 0; i < n; ++i) {
      rep[i] = static_cast<int>(i);
      for (size_t j = 0; j < n; ++j)
        if (type_equiv(g, ix.ones[i], ix.ones[j], f)) {
          if (ix.ones[j].key() < ix.ones[rep[i]].key()) rep[i] = static_cast<int>(j);
        }
    }
    reps.push_back(rep);
  }
  if (reps.empty()) {
    std::vector<int> id(n);
    for (size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
    reps.push_back(id);
  }
  OuterTypeSet out;
  out.sig = beta.sig;
  for (auto& m : beta.members) {
    int k = m.unnamed;
    if (k == 0) {
      out.insert(m);
      continue;
    }
    std::vector<int> ids = ix.one_ids(m);
    std::vector<std::vector<int>> choice(k);
    for (int i = 0; i < k; ++i) {
      std::set<int> r;
      for (auto& rep : reps) r.insert(rep[ids[i]]);
      choice[i].assign(r.begin(), r.end());
    }
    std::vector<int> full(k);
    for (int i = 0; i < k; ++i) full[i] = i + 1;
    std::vector<size_t> idx(k, 0);
    while (true) {
      Structure t = make_type(beta.sig, k, TypeKind::Outer);
      for (int r = 0; r < beta.sig.num_relations(); ++r) {
        const TupleSet& ts = m.rels[r];
        for (size_t x = 0; x < ts.size(); ++x) {
          Tuple u = ts.at(x);
          size_t us = unnamed_set(u).size();
          if (us == 0 || (k >= 2 && us == static_cast<size_t>(k))) t.rels[r].insert(u);
        }
      }
      for (int i = 0; i < k; ++i) {
        const Structure& one = ix.ones[choice[i][idx[i]]];
        for (int r = 0; r < beta.sig.num_relations(); ++r) {
          const TupleSet& ts = one.rels[r];
          for (size_t x = 0; x < ts.size(); ++x) {
            Tuple u = ts.at(x);
            if (unnamed_set(u).empty()) continue;
            for (int& v : u)
              if (v > 0) v = i + 1;
            t.rels[r].insert(u);
          }
        }
      }
      out.insert(std::move(t));
      int i = k - 1;
      while (i >= 0 && ++idx[i] == choice[i].size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  out.max_grade = beta.max_grade;
  out.normalize();
  res.ones_after = out.ones().size();
  ClosureReport rep = check_closed(out, g.slots());
  if (!rep.ok()) throw std::logic_error("reduced type set not closed: " + rep.violations[0]);
  if (res.ones_after > res.ones_before) throw std::logic_error("reduced type set has more 1-types");
  res.beta = out;
  SatGame g2(g.prenex(), out);
  res.resolved = g2.solve(budget);
  if (res.resolved.verdict == GameVerdict::AbelardWins) throw std::logic_error("Eloisa loses on the reduced type set");
  return res;
}

ConjunctionResult solve_conjunction(const Formula& phi, const OuterTypeSet& beta, uint64_t budget) {
  ConjunctionResult res;
  for (auto& c : conjuncts(phi)) res.parts.push_back(to_prenex(c));
  bool unknown = false;
  for (size_t i = 0; i < res.parts.size(); ++i) {
    SatGame g(res.parts[i], beta);
    res.results.push_back(g.solve(budget));
    GameVerdict v = res.results.back().verdict;
    if (v == GameVerdict::AbelardWins) {
      res.verdict = v;
      res.losing_part = static_cast<int>(i);
      return res;
    }
    unknown = unknown || v == GameVerdict::Unknown;
  }
  res.verdict = unknown ? GameVerdict::Unknown : GameVerdict::EloisaWins;
  return res;
}

}  // namespace maslov
