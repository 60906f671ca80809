#include "maslov/reductions.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>

#include "maslov/fragments.hpp"

namespace maslov {

ConstantPartition ConstantPartition::from_blocks(int n, std::vector<std::vector<int>> blocks) {
  ConstantPartition p;
  p.rep.assign(n, -1);
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("empty block in partition");
    std::sort(b.begin(), b.end());
    for (int c : b) {
      if (c < 0 || c >= n) throw std::invalid_argument("partition mentions unknown constant");
      if (p.rep[c] >= 0) throw std::invalid_argument("constant in two blocks");
      p.rep[c] = b[0];
    }
  }
  for (int c = 0; c < n; ++c)
    if (p.rep[c] < 0) blocks.push_back({c});
  std::sort(blocks.begin(), blocks.end());
  for (auto& b : blocks) p.rep[b[0]] = b[0];
  p.blocks = std::move(blocks);
  return p;
}

ConstantPartition ConstantPartition::identity(int n) { return from_blocks(n, {}); }

std::string ConstantPartition::to_string(const Signature& sig) const {
  std::string s;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += " | ";
    for (size_t j = 0; j < blocks[i].size(); ++j) s += (j ? " " : "") + sig.constants[blocks[i][j]];
  }
  return s;
}

ConstantPartition parse_partition(const Signature& sig, const std::string& text) {
  std::vector<std::vector<int>> blocks(1);
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "|") {
      blocks.emplace_back();
      continue;
    }
    int c = sig.constant_index(tok);
    if (c < 0) throw std::invalid_argument("partition mentions unknown constant " + tok);
    blocks.back().push_back(c);
  }
  blocks.erase(std::remove_if(blocks.begin(), blocks.end(), [](auto& b) { return b.empty(); }), blocks.end());
  return ConstantPartition::from_blocks(sig.num_constants(), blocks);
}

std::vector<ConstantPartition> enumerate_partitions(int n) {
  if (n < 0 || n > 8) throw std::invalid_argument("enumerate_partitions: at most 8 constants");
  std::vector<ConstantPartition> out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == n) {
      std::vector<std::vector<int>> blocks(mx + 1);
      for (int c = 0; c < n; ++c) blocks[a[c]].push_back(c);
      if (n == 0) blocks.clear();
      out.push_back(ConstantPartition::from_blocks(n, blocks));
      return;
    }
    for (int b = 0; b <= mx + 1; ++b) {
      if (i == 0 && b > 0) break;
      a[i] = b;
      rec(i + 1, std::max(mx, b));
    }
  };
  rec(0, -1);
  return out;
}

namespace {

NodePtr map_constants(const NodePtr& n, const std::vector<int>& cmap) {
  if (n->op == Op::Atom) {
    std::vector<Term> args = n->args;
    for (Term& t : args)
      if (t.is_const) t.id = cmap[t.id];
    return mk_atom(n->rel, std::move(args));
  }
  auto m = std::make_shared<Node>(*n);
  for (auto& k : m->kids) k = map_constants(k, cmap);
  return m;
}

}  // namespace

Formula reduce_constants(const Formula& phi, const ConstantPartition& p) {
  int n = phi.sig.num_constants();
  if (static_cast<int>(p.rep.size()) != n) throw std::invalid_argument("partition size differs from the constants");
  Formula out = phi;
  out.sig.constants.clear();
  std::vector<int> new_index(n, -1);
  for (int c = 0; c < n; ++c)
    if (p.rep[c] == c) {
      new_index[c] = out.sig.num_constants();
      out.sig.constants.push_back(phi.sig.constants[c]);
    }
  std::vector<int> cmap(n);
  for (int c = 0; c < n; ++c) cmap[c] = new_index[p.rep[c]];
  out.root = map_constants(phi.root, cmap);
  return out;
}

Structure expand_model(const Structure& B, const ConstantPartition& p, const Signature& full) {
  if (!B.total) throw std::invalid_argument("expand_model needs a total structure");
  int n = full.num_constants();
  // image[e] for each element of B: list of elements of the expansion it stands for
  auto image = [&](int e) -> std::vector<int> {
    if (!is_const(e)) return {e};
    int ci = full.constant_index(B.sig.constants[const_of(e)]);
    if (ci < 0 || p.rep[ci] != ci) throw std::invalid_argument("structure constant is not a representative");
    std::vector<int> out;
    for (int c = 0; c < n; ++c)
      if (p.rep[c] == ci) out.push_back(const_elem(c));
    return out;
  };
  Signature sig = full;
  Structure A(sig, B.unnamed, true);
  for (int r = 0; r < B.sig.num_relations(); ++r) {
    int ar = sig.relation_index(B.sig.rel_names[r]);
    if (ar < 0) throw std::invalid_argument("relation missing from target signature");
    const TupleSet& ts = B.rels[r];
    int k = ts.arity();
    for (size_t x = 0; x < ts.size(); ++x) {
      const int* u = ts.raw(x);
      std::vector<std::vector<int>> ch(k);
      for (int i = 0; i < k; ++i) ch[i] = image(u[i]);
      std::vector<size_t> idx(k, 0);
      Tuple t(k);
      while (true) {
        for (int i = 0; i < k; ++i) t[i] = ch[i][idx[i]];
        A.rels[ar].insert(t);
        int i = k - 1;
        while (i >= 0 && ++idx[i] == ch[i].size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return A;
}

namespace {

uint32_t fnv1a(const std::string& s) {
  uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

struct FaufBuilder {
  Formula src;  // rectified NNF input
  Signature sig;
  std::vector<FaufPredicate> preds;
  std::vector<std::pair<std::vector<int>, NodePtr>> ax_parts;  // binders, body

  NodePtr tr(const NodePtr& n) {
    switch (n->op) {
      case Op::Atom:
      case Op::Not:
        return n;
      case Op::And:
      case Op::Or: {
        std::vector<NodePtr> ks;
        for (auto& k : n->kids) ks.push_back(tr(k));
        return n->op == Op::And ? mk_and(ks) : mk_or(ks);
      }
      case Op::Exists:
        return mk_quant(Op::Exists, n->var, tr(n->kids[0]));
      case Op::Forall:
        return replace_block(n);
      default:
        throw std::invalid_argument("translate_fauf: input is not in negation normal form");
    }
  }

  NodePtr replace_block(const NodePtr& mu) {
    std::vector<int> block;
    NodePtr nu = mu;
    while (nu->op == Op::Forall) {
      block.push_back(nu->var);
      nu = nu->kids[0];
    }
    std::vector<int> fv;
    collect_free(mu, fv);
    std::sort(fv.begin(), fv.end());
    fv.erase(std::unique(fv.begin(), fv.end()), fv.end());
    if (fv.size() > 1) throw std::invalid_argument("translate_fauf: universal block with more than one free variable");
    NodePtr body = tr(nu);
    std::string printed = to_string(src, mu);
    char hex[16];
    std::snprintf(hex, sizeof hex, "%08x", fnv1a(printed));
    std::string name = std::string("Pmu_") + hex;
    while (sig.relation_index(name) >= 0) name += "_";
    FaufPredicate p;
    p.name = name;
    p.rel = sig.add_relation(name, static_cast<int>(fv.size()));
    p.free_var = fv.empty() ? -1 : fv[0];
    p.block = block;
    p.mu = mu;
    std::vector<Term> args;
    if (!fv.empty()) args.push_back(var_term(fv[0]));
    NodePtr atom = mk_atom(p.rel, args);
    std::vector<int> binders;
    if (!fv.empty()) binders.push_back(fv[0]);
    binders.insert(binders.end(), block.begin(), block.end());
    ax_parts.push_back({binders, mk_implies(atom, body)});
    preds.push_back(p);
    return atom;
  }
};

}  // namespace

Formula FaufTranslation::conjunction() const {
  Formula out = tr;
  std::vector<NodePtr> ks{tr.root};
  for (auto& a : axioms) ks.push_back(a.root);
  out.root = mk_and(ks);
  return rectify(out);
}

std::vector<Formula> FaufTranslation::conjuncts() const {
  std::vector<Formula> out{tr};
  out.insert(out.end(), axioms.begin(), axioms.end());
  return out;
}

FaufTranslation translate_fauf(const Formula& phi) {
  std::string why;
  Formula src = to_nnf(rectify(phi));
  if (!src.is_sentence()) throw std::invalid_argument("translate_fauf: input has free variables");
  if (!in_forall_uf(src, &why)) throw std::invalid_argument("translate_fauf: input not in forall-UF: " + why);
  FaufBuilder b;
  b.src = src;
  b.sig = src.sig;
  NodePtr top = b.tr(src.root);
  FaufTranslation t;
  t.tr = src;
  t.tr.sig = b.sig;
  t.tr.root = top;
  for (auto& [binders, body] : b.ax_parts) {
    Formula ax = t.tr;
    NodePtr n = body;
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) n = mk_quant(Op::Forall, *it, n);
    ax.root = n;
    t.axioms.push_back(ax);
  }
  t.preds = b.preds;
  t.source = src;
  return t;
}

Structure expand_fauf_model(const Structure& A, const FaufTranslation& t) {
  if (!A.total) throw std::invalid_argument("expand_fauf_model needs a total structure");
  Signature sig = t.tr.sig;
  Structure B(sig, A.unnamed, true);
  for (int r = 0; r < A.sig.num_relations(); ++r) {
    int br = sig.relation_index(A.sig.rel_names[r]);
    if (br < 0) continue;
    for (size_t i = 0; i < A.rels[r].size(); ++i) B.rels[br].insert(A.rels[r].raw(i));
  }
  for (auto& p : t.preds) {
    Formula mu = t.source;
    int top = static_cast<int>(mu.var_names.size());
    mu.root = p.mu;
    if (p.free_var < 0) {
      if (model_check(A, mu)) B.rels[p.rel].insert(Tuple{});
      continue;
    }
    for (int e : A.domain()) {
      Assignment f(top, 0);
      f[p.free_var] = e;
      if (model_check(A, mu, f)) B.rels[p.rel].insert(Tuple{e});
    }
  }
  return B;
}

std::vector<Formula> split_positive_boolean(const Formula& phi) {
  Formula f = to_nnf(rectify(phi));
  auto closed = [](const NodePtr& n) {
    std::vector<int> fv;
    collect_free(n, fv);
    return fv.empty();
  };
  using Dnf = std::vector<std::vector<NodePtr>>;
  std::function<Dnf(const NodePtr&)> go = [&](const NodePtr& n) -> Dnf {
    bool split = (n->op == Op::And || n->op == Op::Or) &&
                 std::all_of(n->kids.begin(), n->kids.end(), closed);
    if (!split) {
      Formula leaf = f;
      leaf.root = n;
      std::vector<int> sp;
      std::vector<std::string> diag;
      if (!kbar_specials(leaf, sp, diag))
        throw std::invalid_argument("split_positive_boolean: leaf not in Kbar: " + to_string(f, n));
      return {{n}};
    }
    if (n->op == Op::Or) {
      Dnf out;
      for (auto& k : n->kids)
        for (auto& c : go(k)) out.push_back(c);
      return out;
    }
    Dnf acc{{}};
    for (auto& k : n->kids) {
      Dnf next;
      for (auto& a : acc)
        for (auto& c : go(k)) {
          auto m = a;
          m.insert(m.end(), c.begin(), c.end());
          next.push_back(m);
        }
      acc = std::move(next);
    }
    return acc;
  };
  std::vector<Formula> out;
  for (auto& c : go(f.root)) {
    Formula g = f;
    g.root = mk_and(c);
    out.push_back(rectify(g));
  }
  return out;
}

}  // namespace maslov
