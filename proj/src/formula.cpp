#include "maslov/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace maslov {

int Signature::constant_index(const std::string& name) const {
  auto it = std::find(constants.begin(), constants.end(), name);
  return it == constants.end() ? -1 : static_cast<int>(it - constants.begin());
}

int Signature::relation_index(const std::string& name) const {
  auto it = std::find(rel_names.begin(), rel_names.end(), name);
  return it == rel_names.end() ? -1 : static_cast<int>(it - rel_names.begin());
}

int Signature::add_relation(const std::string& name, int arity) {
  int r = relation_index(name);
  if (r >= 0) {
    if (arities[r] != arity) throw std::invalid_argument("arity clash for relation " + name);
    return r;
  }
  rel_names.push_back(name);
  arities.push_back(arity);
  return num_relations() - 1;
}

int Signature::add_constant(const std::string& name) {
  int c = constant_index(name);
  if (c >= 0) return c;
  constants.push_back(name);
  return num_constants() - 1;
}

int Signature::max_arity() const {
  int m = 0;
  for (int a : arities) m = std::max(m, a);
  return m;
}

NodePtr mk_atom(int rel, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->op = Op::Atom;
  n->rel = rel;
  n->args = std::move(args);
  return n;
}

NodePtr mk_not(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->kids = {std::move(a)};
  return n;
}

static NodePtr mk_nary(Op op, std::vector<NodePtr> kids) {
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->op = op;
  for (auto& k : kids) {
    if (k->op == op)
      n->kids.insert(n->kids.end(), k->kids.begin(), k->kids.end());
    else
      n->kids.push_back(k);
  }
  return n;
}

NodePtr mk_and(std::vector<NodePtr> kids) { return mk_nary(Op::And, std::move(kids)); }
NodePtr mk_or(std::vector<NodePtr> kids) { return mk_nary(Op::Or, std::move(kids)); }

NodePtr mk_implies(NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = Op::Implies;
  n->kids = {std::move(a), std::move(b)};
  return n;
}

NodePtr mk_quant(Op q, int var, NodePtr body) {
  auto n = std::make_shared<Node>();
  n->op = q;
  n->var = var;
  n->kids = {std::move(body)};
  return n;
}

int Formula::new_var(const std::string& base) {
  std::string name = base;
  for (int i = 2; std::find(var_names.begin(), var_names.end(), name) != var_names.end(); ++i)
    name = base + "_" + std::to_string(i);
  var_names.push_back(name);
  return static_cast<int>(var_names.size()) - 1;
}

void collect_free(const NodePtr& n, std::vector<int>& out) {
  std::function<void(const NodePtr&, std::vector<int>&)> go = [&](const NodePtr& m, std::vector<int>& bound) {
    if (m->op == Op::Atom) {
      for (const Term& t : m->args)
        if (!t.is_const && std::find(bound.begin(), bound.end(), t.id) == bound.end() &&
            std::find(out.begin(), out.end(), t.id) == out.end())
          out.push_back(t.id);
      return;
    }
    if (m->op == Op::Forall || m->op == Op::Exists) {
      bound.push_back(m->var);
      go(m->kids[0], bound);
      bound.pop_back();
      return;
    }
    for (auto& k : m->kids) go(k, bound);
  };
  std::vector<int> bound;
  go(n, bound);
}

std::vector<int> Formula::free_vars() const {
  std::vector<int> out;
  collect_free(root, out);
  return out;
}

bool has_quantifier(const NodePtr& n) {
  if (n->op == Op::Forall || n->op == Op::Exists) return true;
  for (auto& k : n->kids)
    if (has_quantifier(k)) return true;
  return false;
}

void collect_atoms(const NodePtr& n, std::vector<NodePtr>& out) {
  if (n->op == Op::Atom) {
    out.push_back(n);
    return;
  }
  for (auto& k : n->kids) collect_atoms(k, out);
}

int count_quantifiers(const NodePtr& n, Op q) {
  int c = n->op == q ? 1 : 0;
  for (auto& k : n->kids) c += count_quantifiers(k, q);
  return c;
}

int formula_size(const NodePtr& n) {
  switch (n->op) {
    case Op::Atom:
      return 1 + static_cast<int>(n->args.size());
    case Op::Not:
      return 1 + formula_size(n->kids[0]);
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      int s = static_cast<int>(n->kids.size()) - 1;
      for (auto& k : n->kids) s += formula_size(k);
      return s;
    }
    case Op::Forall:
    case Op::Exists:
      return 2 + formula_size(n->kids[0]);
  }
  return 0;
}

NodePtr substitute(const NodePtr& n, const std::map<int, Term>& sub) {
  if (n->op == Op::Atom) {
    std::vector<Term> args = n->args;
    bool changed = false;
    for (Term& t : args) {
      if (t.is_const) continue;
      auto it = sub.find(t.id);
      if (it != sub.end()) {
        t = it->second;
        changed = true;
      }
    }
    return changed ? mk_atom(n->rel, std::move(args)) : n;
  }
  if ((n->op == Op::Forall || n->op == Op::Exists) && sub.count(n->var)) {
    auto inner = sub;
    inner.erase(n->var);
    return mk_quant(n->op, n->var, substitute(n->kids[0], inner));
  }
  auto m = std::make_shared<Node>(*n);
  for (auto& k : m->kids) k = substitute(k, sub);
  return m;
}

// ---- parser ----

ParseError::ParseError(const std::string& msg, int l, int c)
    : std::runtime_error(msg + " at line " + std::to_string(l) + ", column " + std::to_string(c)), line(l), col(c) {}

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto adv = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < s.size() && s[i + 1] == '/')) {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    int l = line, co = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, s.substr(i, j - i), l, co});
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Number, s.substr(i, j - i), l, co});
      adv(j - i);
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      out.push_back({Tok::Punct, "->", l, co});
      adv(2);
      continue;
    }
    if (c == '=') throw ParseError("equality is not supported", l, co);
    if (std::string("()[],.;/&|~!").find(c) != std::string::npos) {
      out.push_back({Tok::Punct, std::string(1, c == '!' ? '~' : c), l, co});
      adv(1);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", l, co);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  Formula run() {
    header();
    f_.root = implication();
    if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'");
    return f_;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  Formula f_;
  std::map<std::string, std::vector<int>> scope_;
  std::map<std::string, int> free_;

  const Token& peek() const { return toks_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  bool accept(const std::string& p) {
    if (peek().kind == Tok::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail("expected '" + p + "'");
  }
  bool is_kw(const std::string& k) const { return peek().kind == Tok::Ident && peek().text == k; }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected identifier");
    return toks_[pos_++].text;
  }

  void header() {
    while (is_kw("const") || is_kw("rel")) {
      bool is_const = peek().text == "const";
      ++pos_;
      while (!accept(";")) {
        std::string name = ident();
        if (is_const) {
          f_.sig.add_constant(name);
        } else {
          expect("/");
          if (peek().kind != Tok::Number) fail("expected arity");
          int ar = std::stoi(toks_[pos_++].text);
          if (f_.sig.relation_index(name) >= 0) fail("relation " + name + " declared twice");
          f_.sig.add_relation(name, ar);
        }
        accept(",");
      }
    }
  }

  NodePtr implication() {
    NodePtr a = disjunction();
    if (accept("->")) return mk_implies(a, implication());
    return a;
  }

  NodePtr disjunction() {
    std::vector<NodePtr> ks{conjunction()};
    while (accept("|")) ks.push_back(conjunction());
    return mk_or(std::move(ks));
  }

  NodePtr conjunction() {
    std::vector<NodePtr> ks{unary()};
    while (accept("&")) ks.push_back(unary());
    return mk_and(std::move(ks));
  }

  NodePtr unary() {
    if (accept("~")) return mk_not(unary());
    if (is_kw("forall") || is_kw("exists")) return quantified();
    if (accept("(")) {
      NodePtr a = implication();
      expect(")");
      return a;
    }
    if (accept("[")) {
      NodePtr a = implication();
      expect("]");
      return a;
    }
    return atom();
  }

  NodePtr quantified() {
    Op q = peek().text == "forall" ? Op::Forall : Op::Exists;
    ++pos_;
    std::vector<std::pair<std::string, int>> bound;
    while (peek().kind == Tok::Ident) {
      std::string name = toks_[pos_].text;
      if (f_.sig.constant_index(name) >= 0) fail("cannot quantify constant " + name);
      ++pos_;
      int v = f_.new_var(name);
      scope_[name].push_back(v);
      bound.push_back({name, v});
      accept(",");
    }
    if (bound.empty()) fail("expected variable after quantifier");
    expect(".");
    NodePtr body = implication();
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      body = mk_quant(q, it->second, body);
      scope_[it->first].pop_back();
    }
    return body;
  }

  Term term() {
    std::string name = ident();
    auto sc = scope_.find(name);
    if (sc != scope_.end() && !sc->second.empty()) return var_term(sc->second.back());
    int c = f_.sig.constant_index(name);
    if (c >= 0) return const_term(c);
    auto fr = free_.find(name);
    if (fr != free_.end()) return var_term(fr->second);
    int v = f_.new_var(name);
    free_[name] = v;
    return var_term(v);
  }

  NodePtr atom() {
    int line = peek().line, col = peek().col;
    std::string name = ident();
    if (name == "forall" || name == "exists" || name == "const" || name == "rel")
      throw ParseError("misplaced keyword " + name, line, col);
    std::vector<Term> args;
    if (accept("(")) {
      if (!accept(")")) {
        args.push_back(term());
        while (accept(",")) args.push_back(term());
        expect(")");
      }
    }
    int r = f_.sig.relation_index(name);
    int ar = static_cast<int>(args.size());
    if (r < 0) {
      r = f_.sig.add_relation(name, ar);
    } else if (f_.sig.arities[r] != ar) {
      throw ParseError("relation " + name + " used with arity " + std::to_string(ar) + ", declared " +
                           std::to_string(f_.sig.arities[r]),
                       line, col);
    }
    return mk_atom(r, std::move(args));
  }
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).run(); }

Formula rectify(const Formula& f) {
  Formula out;
  out.sig = f.sig;
  std::map<int, int> free_map;
  std::function<NodePtr(const NodePtr&, std::map<int, int>&)> go = [&](const NodePtr& n,
                                                                       std::map<int, int>& env) -> NodePtr {
    if (n->op == Op::Atom) {
      std::vector<Term> args = n->args;
      for (Term& t : args) {
        if (t.is_const) continue;
        auto it = env.find(t.id);
        if (it != env.end()) {
          t.id = it->second;
        } else {
          auto fr = free_map.find(t.id);
          if (fr == free_map.end()) fr = free_map.emplace(t.id, out.new_var(f.var_names[t.id])).first;
          t.id = fr->second;
        }
      }
      return mk_atom(n->rel, std::move(args));
    }
    if (n->op == Op::Forall || n->op == Op::Exists) {
      int v = out.new_var(f.var_names[n->var]);
      auto saved = env.find(n->var) == env.end() ? -1 : env[n->var];
      env[n->var] = v;
      NodePtr body = go(n->kids[0], env);
      if (saved < 0)
        env.erase(n->var);
      else
        env[n->var] = saved;
      return mk_quant(n->op, v, body);
    }
    auto m = std::make_shared<Node>(*n);
    for (auto& k : m->kids) k = go(k, env);
    return m;
  };
  std::map<int, int> env;
  out.root = go(f.root, env);
  return out;
}

// ---- printer ----

std::string signature_header(const Signature& sig) {
  std::ostringstream os;
  if (!sig.constants.empty()) {
    os << "const";
    for (auto& c : sig.constants) os << ' ' << c;
    os << ";\n";
  }
  if (!sig.rel_names.empty()) {
    os << "rel";
    for (int r = 0; r < sig.num_relations(); ++r) os << ' ' << sig.rel_names[r] << '/' << sig.arities[r];
    os << ";\n";
  }
  return os.str();
}

namespace {

int prec(const NodePtr& n) {
  switch (n->op) {
    case Op::Forall:
    case Op::Exists:
      return 0;
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    default:
      return 4;
  }
}

void print(const Formula& f, const NodePtr& n, std::ostream& os);

void print_child(const Formula& f, const NodePtr& n, int need, std::ostream& os) {
  if (prec(n) < need) {
    os << '(';
    print(f, n, os);
    os << ')';
  } else {
    print(f, n, os);
  }
}

void print(const Formula& f, const NodePtr& n, std::ostream& os) {
  switch (n->op) {
    case Op::Atom: {
      os << f.sig.rel_names[n->rel];
      if (!n->args.empty()) {
        os << '(';
        for (size_t i = 0; i < n->args.size(); ++i) {
          if (i) os << ',';
          const Term& t = n->args[i];
          os << (t.is_const ? f.sig.constants[t.id] : f.var_names[t.id]);
        }
        os << ')';
      }
      return;
    }
    case Op::Not:
      os << '~';
      print_child(f, n->kids[0], 4, os);
      return;
    case Op::And:
    case Op::Or: {
      int need = n->op == Op::And ? 4 : 3;
      const char* sep = n->op == Op::And ? " & " : " | ";
      for (size_t i = 0; i < n->kids.size(); ++i) {
        if (i) os << sep;
        print_child(f, n->kids[i], need, os);
      }
      return;
    }
    case Op::Implies:
      print_child(f, n->kids[0], 2, os);
      os << " -> ";
      print_child(f, n->kids[1], 1, os);
      return;
    case Op::Forall:
    case Op::Exists: {
      os << (n->op == Op::Forall ? "forall" : "exists");
      NodePtr m = n;
      while (m->op == n->op) {
        os << ' ' << f.var_names[m->var];
        m = m->kids[0];
      }
      os << ". ";
      print(f, m, os);
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f, const NodePtr& n) {
  std::ostringstream os;
  print(f, n, os);
  return os.str();
}

std::string to_string(const Formula& f, bool with_header) {
  std::string body = to_string(f, f.root);
  return with_header ? signature_header(f.sig) + body : body;
}

}  // namespace maslov
