#include "maslov/search.hpp"

#include <algorithm>
#include <map>

namespace maslov {

namespace {

enum class G { Atom, Not, And, Or, True, False };

struct GNode {
  G kind;
  int atom = -1;
  std::vector<int> kids;
};

struct Budget {
  uint64_t used = 0, cap;
  bool spend(uint64_t n = 1) {
    used += n;
    return used <= cap;
  }
};

struct OutOfBudget {};

class Grounder {
 public:
  Grounder(const Formula& f, int k, Budget& b) : f_(f), k_(k), b_(b) {
    for (int c = 0; c < f.sig.num_constants(); ++c) dom_.push_back(const_elem(c));
    for (int e = 1; e <= k; ++e) dom_.push_back(e);
  }

  int ground(const NodePtr& n, std::vector<int>& env) {
    if (!b_.spend()) throw OutOfBudget{};
    switch (n->op) {
      case Op::Atom: {
        Tuple t;
        for (const Term& a : n->args) t.push_back(a.is_const ? const_elem(a.id) : env[a.id]);
        auto key = std::make_pair(n->rel, t);
        auto it = atom_ids.find(key);
        int id = it == atom_ids.end() ? atom_ids.emplace(key, static_cast<int>(atom_ids.size())).first->second
                                      : it->second;
        return add({G::Atom, id, {}});
      }
      case Op::Not:
        return add({G::Not, -1, {ground(n->kids[0], env)}});
      case Op::And:
      case Op::Or: {
        GNode g{n->op == Op::And ? G::And : G::Or, -1, {}};
        for (auto& k : n->kids) g.kids.push_back(ground(k, env));
        return add(std::move(g));
      }
      case Op::Implies: {
        int a = add({G::Not, -1, {ground(n->kids[0], env)}});
        return add({G::Or, -1, {a, ground(n->kids[1], env)}});
      }
      case Op::Forall:
      case Op::Exists: {
        GNode g{n->op == Op::Forall ? G::And : G::Or, -1, {}};
        int saved = env[n->var];
        for (int e : dom_) {
          env[n->var] = e;
          g.kids.push_back(ground(n->kids[0], env));
        }
        env[n->var] = saved;
        if (g.kids.empty()) return add({n->op == Op::Forall ? G::True : G::False, -1, {}});
        return add(std::move(g));
      }
    }
    return -1;
  }

  std::vector<GNode> nodes;
  std::map<std::pair<int, Tuple>, int> atom_ids;

 private:
  const Formula& f_;
  int k_;
  Budget& b_;
  std::vector<int> dom_;
  int add(GNode g) {
    nodes.push_back(std::move(g));
    return static_cast<int>(nodes.size()) - 1;
  }
};

// 0 false, 1 true, 2 unknown
int eval3(const std::vector<GNode>& nodes, int i, const std::vector<int8_t>& val) {
  const GNode& g = nodes[i];
  switch (g.kind) {
    case G::True:
      return 1;
    case G::False:
      return 0;
    case G::Atom:
      return val[g.atom];
    case G::Not: {
      int v = eval3(nodes, g.kids[0], val);
      return v == 2 ? 2 : 1 - v;
    }
    case G::And: {
      int r = 1;
      for (int k : g.kids) {
        int v = eval3(nodes, k, val);
        if (v == 0) return 0;
        if (v == 2) r = 2;
      }
      return r;
    }
    case G::Or: {
      int r = 0;
      for (int k : g.kids) {
        int v = eval3(nodes, k, val);
        if (v == 1) return 1;
        if (v == 2) r = 2;
      }
      return r;
    }
  }
  return 2;
}

}  // namespace

SearchResult bounded_model_search(const Formula& phi, int N, uint64_t budget) {
  if (N < 1) throw std::invalid_argument("size bound must be positive");
  if (!phi.is_sentence()) throw std::invalid_argument("bounded_model_search needs a sentence");
  SearchResult res;
  res.bound = N;
  Budget b{0, budget};
  int C = phi.sig.num_constants();
  auto order_key = [&](int e) { return is_const(e) ? const_of(e) : C + e - 1; };
  try {
    for (int k = 1; k <= N; ++k) {
      Grounder g(phi, k, b);
      std::vector<int> env(phi.var_names.size(), 0);
      int root = g.ground(phi.root, env);
      // decision order: relation, then tuple in domain order
      std::vector<std::pair<std::pair<int, Tuple>, int>> atoms;
      for (auto& [key, id] : g.atom_ids) {
        Tuple ord;
        for (int e : key.second) ord.push_back(order_key(e));
        atoms.push_back({{key.first, ord}, id});
      }
      std::sort(atoms.begin(), atoms.end());
      std::vector<int> order;
      for (auto& a : atoms) order.push_back(a.second);
      std::vector<int8_t> val(g.atom_ids.size(), 2);

      size_t depth = 0;
      std::vector<int8_t> tried(order.size(), 0);  // 0: none, 1: false tried, 2: both tried
      bool found = false;
      while (true) {
        if (!b.spend()) throw OutOfBudget{};
        int v = eval3(g.nodes, root, val);
        if (v == 1) {
          found = true;
          break;
        }
        bool descend = v == 2 && depth < order.size();
        if (descend) {
          val[order[depth]] = 0;
          tried[depth] = 1;
          ++depth;
          continue;
        }
        // backtrack
        while (depth > 0 && tried[depth - 1] == 2) {
          --depth;
          val[order[depth]] = 2;
          tried[depth] = 0;
        }
        if (depth == 0) break;
        val[order[depth - 1]] = 1;
        tried[depth - 1] = 2;
      }
      if (found) {
        Structure A(phi.sig, k, true);
        for (auto& [key, id] : g.atom_ids)
          if (val[id] == 1) A.set_true(key.first, key.second);
        res.verdict = SearchVerdict::Sat;
        res.model = std::move(A);
        res.nodes = b.used;
        return res;
      }
    }
  } catch (const OutOfBudget&) {
    res.verdict = SearchVerdict::BudgetExhausted;
    res.nodes = b.used;
    return res;
  }
  res.verdict = SearchVerdict::NoneUpTo;
  res.nodes = b.used;
  return res;
}

}  // namespace maslov
