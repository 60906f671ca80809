#include "maslov/fragments.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <json.hpp>

namespace maslov {

namespace {

NodePtr nnf(const NodePtr& n, bool neg) {
  switch (n->op) {
    case Op::Atom:
      return neg ? mk_not(n) : n;
    case Op::Not:
      return nnf(n->kids[0], !neg);
    case Op::And:
    case Op::Or: {
      std::vector<NodePtr> ks;
      for (auto& k : n->kids) ks.push_back(nnf(k, neg));
      bool conj = (n->op == Op::And) != neg;
      return conj ? mk_and(std::move(ks)) : mk_or(std::move(ks));
    }
    case Op::Implies:
      if (neg) return mk_and({nnf(n->kids[0], false), nnf(n->kids[1], true)});
      if (has_quantifier(n->kids[0])) throw NotRelaxed("implication with a quantified left side");
      return mk_or({nnf(n->kids[0], true), nnf(n->kids[1], false)});
    case Op::Forall:
    case Op::Exists:
      if (neg) throw NotRelaxed("negation over a quantifier");
      return mk_quant(n->op, n->var, nnf(n->kids[0], false));
  }
  return n;
}

std::vector<int> atom_vars(const NodePtr& a) {
  std::vector<int> vs;
  for (const Term& t : a->args)
    if (!t.is_const && std::find(vs.begin(), vs.end(), t.id) == vs.end()) vs.push_back(t.id);
  return vs;
}

std::string prefix_string(const Formula& f, const Prefix& p) {
  std::string s;
  for (auto& b : p) s += std::string(b.q == Op::Forall ? "A" : "E") + f.var_names[b.var] + " ";
  return s;
}

}  // namespace

Formula to_nnf(const Formula& f) {
  Formula out = f;
  out.root = nnf(f.root, false);
  return out;
}

PrefixProfile compute_prefixes(const Formula& f) {
  PrefixProfile prof;
  std::vector<Binder> stack;
  int exists_depth = 0;
  std::function<void(const NodePtr&)> go = [&](const NodePtr& n) {
    if (n->op == Op::Atom) {
      auto vs = atom_vars(n);
      Prefix p;
      for (auto& b : stack)
        if (std::find(vs.begin(), vs.end(), b.var) != vs.end()) p.push_back(b);
      prof.atoms.push_back(n);
      prof.prefixes.push_back(p);
      return;
    }
    if (n->op == Op::Forall || n->op == Op::Exists) {
      if (n->op == Op::Forall) {
        prof.universals.push_back(n->var);
        if (exists_depth > 0) prof.under_exists.insert(n->var);
      } else {
        ++exists_depth;
      }
      stack.push_back({n->op, n->var});
      go(n->kids[0]);
      stack.pop_back();
      if (n->op == Op::Exists) --exists_depth;
      return;
    }
    if (n->op == Op::Not && n->kids[0]->op != Op::Atom && has_quantifier(n->kids[0]))
      throw NotRelaxed("negation over a quantifier");
    for (auto& k : n->kids) go(k);
  };
  go(f.root);
  return prof;
}

bool kbar_specials(const Formula& f, std::vector<int>& specials, std::vector<std::string>& diag) {
  PrefixProfile prof = compute_prefixes(f);
  specials.clear();
  const Prefix* common = nullptr;
  for (size_t i = 0; i < prof.atoms.size(); ++i) {
    const Prefix& p = prof.prefixes[i];
    if (p.size() < 2 || p.back().q == Op::Exists) continue;
    if (!common) {
      common = &p;
      for (auto& b : p) {
        if (b.q != Op::Forall || prof.under_exists.count(b.var)) {
          diag.push_back("atom " + to_string(f, prof.atoms[i]) + " has prefix " + prefix_string(f, p) +
                         "which is not an all-universal block outside existential scope");
          return false;
        }
      }
    } else if (p != *common) {
      diag.push_back("atom " + to_string(f, prof.atoms[i]) + " has prefix " + prefix_string(f, p) +
                     "differing from " + prefix_string(f, *common));
      return false;
    }
  }
  if (common) {
    for (auto& b : *common) specials.push_back(b.var);
    return true;
  }
  // Unconstrained: outermost maximal universal block outside existential scope.
  std::deque<NodePtr> q{f.root};
  while (!q.empty()) {
    NodePtr n = q.front();
    q.pop_front();
    if (n->op == Op::Exists || n->op == Op::Atom) continue;
    if (n->op == Op::Forall) {
      for (NodePtr m = n; m->op == Op::Forall; m = m->kids[0]) specials.push_back(m->var);
      return true;
    }
    for (auto& k : n->kids) q.push_back(k);
  }
  return true;
}

bool in_forall_uf(const Formula& phi, std::string* why) {
  Formula f;
  try {
    f = to_nnf(phi);
  } catch (const NotRelaxed& e) {
    if (why) *why = e.what();
    return false;
  }
  auto fail = [&](const std::string& msg) {
    if (why && why->empty()) *why = msg;
    return false;
  };
  auto is_literal = [](const NodePtr& n) {
    return n->op == Op::Atom || (n->op == Op::Not && n->kids[0]->op == Op::Atom);
  };
  auto lit_atom = [](const NodePtr& n) { return n->op == Op::Atom ? n : n->kids[0]; };
  std::function<bool(const NodePtr&)> uf = [&](const NodePtr& n) -> bool {
    if (is_literal(n)) {
      if (atom_vars(lit_atom(n)).size() <= 1) return true;
      return fail("literal " + to_string(f, n) + " with several variables outside a quantifier block");
    }
    if (n->op == Op::And || n->op == Op::Or) {
      for (auto& k : n->kids)
        if (!uf(k)) return false;
      return true;
    }
    if (n->op != Op::Forall && n->op != Op::Exists) return fail("unexpected connective");
    Op q = n->op;
    std::vector<int> block;
    NodePtr body = n;
    for (; body->op == q; body = body->kids[0]) block.push_back(body->var);
    std::vector<NodePtr> leaves;
    std::function<void(const NodePtr&)> flat = [&](const NodePtr& m) {
      if (m->op == Op::And || m->op == Op::Or) {
        for (auto& k : m->kids) flat(k);
      } else {
        leaves.push_back(m);
      }
    };
    flat(body);
    if (q == Op::Forall) {
      std::vector<int> fv;
      collect_free(n, fv);
      if (fv.size() > 1) return fail("universal block " + to_string(f, n) + " has more than one free variable");
      std::optional<std::vector<int>> vbar;
      for (auto& l : leaves) {
        if (is_literal(l)) {
          auto vs = atom_vars(lit_atom(l));
          if (vs.size() <= 1) continue;
          std::sort(vs.begin(), vs.end());
          if (!vbar) vbar = vs;
          if (*vbar != vs) return fail("literals of " + to_string(f, n) + " are not uniform");
        } else if (!uf(l)) {
          return false;
        }
      }
      return true;
    }
    for (auto& l : leaves) {
      if (is_literal(l)) {
        auto vs = atom_vars(lit_atom(l));
        if (vs.size() <= 1) continue;
        bool hit = std::any_of(vs.begin(), vs.end(),
                               [&](int v) { return std::find(block.begin(), block.end(), v) != block.end(); });
        if (!hit) return fail("literal " + to_string(f, l) + " misses the existential block");
      } else if (!uf(l)) {
        return false;
      }
    }
    return true;
  };
  return uf(f.root);
}

std::vector<Formula> conjuncts(const Formula& phi) {
  Formula f = to_nnf(rectify(phi));
  std::vector<Formula> out;
  if (f.root->op != Op::And) {
    out.push_back(f);
    return out;
  }
  for (auto& k : f.root->kids) {
    Formula c = f;
    c.root = k;
    out.push_back(rectify(c));
  }
  return out;
}

std::string class_name(FragClass c, int k) {
  switch (c) {
    case FragClass::Kbar:
      return "Kbar";
    case FragClass::DKbar:
      return "DKbar";
    case FragClass::KbarSkolem:
      return "Kbar-Skolem";
    case FragClass::KbarForallK:
      return "Kbar^{forall=" + std::to_string(k) + "}";
    case FragClass::Ackermann:
      return "Ackermann";
    case FragClass::Goedel:
      return "Goedel";
    case FragClass::ForallUF:
      return "forall-UF";
    case FragClass::None:
      return "none";
  }
  return "?";
}

Classification classify(const Formula& phi) {
  Classification c;
  Formula f = rectify(phi);
  if (!f.is_sentence()) c.diagnostics.push_back("formula has free variables");
  std::string why;
  if (in_forall_uf(f, &why)) c.classes.insert(FragClass::ForallUF);
  Formula n;
  try {
    n = to_nnf(f);
  } catch (const NotRelaxed& e) {
    c.diagnostics.push_back(e.what());
    if (c.classes.empty()) c.classes.insert(FragClass::None);
    return c;
  }
  PrefixProfile prof = compute_prefixes(n);
  c.universal_count = static_cast<int>(prof.universals.size());
  std::vector<int> sp;
  if (f.is_sentence() && kbar_specials(n, sp, c.diagnostics)) {
    c.classes.insert(FragClass::Kbar);
    c.classes.insert(FragClass::DKbar);
    c.specials = sp;
    c.grade = static_cast<int>(sp.size());
    for (int v : sp) c.special_names.push_back(n.var_names[v]);
    c.forall_k = c.universal_count;
    c.classes.insert(FragClass::KbarForallK);
    if (prof.under_exists.empty()) {
      c.classes.insert(FragClass::KbarSkolem);
      if (c.universal_count <= 1) c.classes.insert(FragClass::Ackermann);
      if (c.universal_count <= 2) c.classes.insert(FragClass::Goedel);
    }
  } else if (f.is_sentence() && n.root->op == Op::And) {
    bool all = true;
    for (auto& part : conjuncts(f)) {
      std::vector<int> s2;
      std::vector<std::string> d2;
      if (!kbar_specials(part, s2, d2)) all = false;
    }
    if (all) c.classes.insert(FragClass::DKbar);
  }
  if (c.classes.empty()) c.classes.insert(FragClass::None);
  if (!why.empty() && !c.has(FragClass::ForallUF)) c.diagnostics.push_back("forall-UF: " + why);
  return c;
}

std::string classification_json(const Classification& c) {
  nlohmann::ordered_json j;
  j["classes"] = nlohmann::json::array();
  for (auto k : c.classes) j["classes"].push_back(class_name(k, c.forall_k));
  j["grade"] = c.grade;
  j["specials"] = c.special_names;
  j["universal_count"] = c.universal_count;
  j["diagnostics"] = c.diagnostics;
  return j.dump(2);
}

std::vector<int> Prenex::vars() const {
  std::vector<int> v = specials;
  for (auto& b : word) v.push_back(b.var);
  return v;
}

Formula prenex_sentence(const Formula& base, const std::vector<Binder>& binders, const NodePtr& matrix) {
  Formula out = base;
  NodePtr n = matrix;
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) n = mk_quant(it->q, it->var, n);
  out.root = n;
  return out;
}

namespace {

struct Pulled {
  std::vector<Binder> word;
  NodePtr matrix;
};

Pulled pull(const NodePtr& n, const std::set<int>& drop) {
  if (n->op == Op::Forall || n->op == Op::Exists) {
    Pulled p = pull(n->kids[0], drop);
    if (!drop.count(n->var)) p.word.insert(p.word.begin(), {n->op, n->var});
    return p;
  }
  if (n->op == Op::And || n->op == Op::Or) {
    std::vector<Pulled> ps;
    for (auto& k : n->kids) ps.push_back(pull(k, drop));
    Pulled out;
    std::vector<NodePtr> ms;
    for (auto& p : ps) ms.push_back(p.matrix);
    out.matrix = n->op == Op::And ? mk_and(ms) : mk_or(ms);
    std::vector<size_t> head(ps.size(), 0);
    while (true) {
      int pick = -1;
      for (Op want : {Op::Forall, Op::Exists}) {
        for (size_t i = 0; i < ps.size() && pick < 0; ++i)
          if (head[i] < ps[i].word.size() && ps[i].word[head[i]].q == want) pick = static_cast<int>(i);
        if (pick >= 0) break;
      }
      if (pick < 0) break;
      out.word.push_back(ps[pick].word[head[pick]++]);
    }
    return out;
  }
  return {{}, n};
}

}  // namespace

Prenex to_prenex(const Formula& phi, bool ensure_exists) {
  Formula f = to_nnf(rectify(phi));
  std::vector<int> sp;
  std::vector<std::string> diag;
  if (!f.is_sentence() || !kbar_specials(f, sp, diag))
    throw std::invalid_argument("to_prenex: input not in Kbar" + (diag.empty() ? std::string() : ": " + diag[0]));
  Prenex P;
  std::set<int> drop(sp.begin(), sp.end());
  Pulled p = pull(f.root, drop);
  P.specials = sp;
  P.word = p.word;
  P.matrix = p.matrix;
  Formula base = f;
  if (P.specials.empty()) {
    P.specials.push_back(base.new_var("d"));
    P.dummy_special = true;
  }
  if (ensure_exists && std::none_of(P.word.begin(), P.word.end(), [](const Binder& b) { return b.q == Op::Exists; })) {
    P.word.push_back({Op::Exists, base.new_var("e")});
    P.dummy_exists = true;
  }
  std::vector<Binder> all;
  for (int v : P.specials) all.push_back({Op::Forall, v});
  all.insert(all.end(), P.word.begin(), P.word.end());
  P.formula = prenex_sentence(base, all, P.matrix);
  return P;
}

}  // namespace maslov
