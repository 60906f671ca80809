#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace maslov {

struct Signature {
  std::vector<std::string> constants;
  std::vector<std::string> rel_names;
  std::vector<int> arities;

  int constant_index(const std::string& name) const;  // -1 if absent
  int relation_index(const std::string& name) const;  // -1 if absent
  int add_relation(const std::string& name, int arity);
  int add_constant(const std::string& name);
  int num_constants() const { return static_cast<int>(constants.size()); }
  int num_relations() const { return static_cast<int>(rel_names.size()); }
  int max_arity() const;
  bool operator==(const Signature&) const = default;
};

// Elements: unnamed 1..k, constant i encoded as -(i+1).
inline int const_elem(int ci) { return -(ci + 1); }
inline int const_of(int e) { return -e - 1; }
inline bool is_const(int e) { return e < 0; }

struct Term {
  bool is_const = false;
  int id = 0;  // variable id or constant index
  bool operator==(const Term&) const = default;
};

enum class Op { Atom, Not, And, Or, Implies, Forall, Exists };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op;
  int rel = -1;
  std::vector<Term> args;
  int var = -1;
  std::vector<NodePtr> kids;
};

NodePtr mk_atom(int rel, std::vector<Term> args);
NodePtr mk_not(NodePtr a);
NodePtr mk_and(std::vector<NodePtr> kids);
NodePtr mk_or(std::vector<NodePtr> kids);
NodePtr mk_implies(NodePtr a, NodePtr b);
NodePtr mk_quant(Op q, int var, NodePtr body);
inline Term var_term(int v) { return {false, v}; }
inline Term const_term(int c) { return {true, c}; }

struct Formula {
  Signature sig;
  std::vector<std::string> var_names;
  NodePtr root;

  int new_var(const std::string& base);
  std::vector<int> free_vars() const;
  bool is_sentence() const { return free_vars().empty(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col);
  int line, col;
};

Formula parse_formula(const std::string& text);

// Rebinds every quantifier to a fresh variable id so that each id is bound once.
Formula rectify(const Formula& f);

std::string to_string(const Formula& f, const NodePtr& n);
std::string to_string(const Formula& f, bool with_header = true);
std::string signature_header(const Signature& sig);

int formula_size(const NodePtr& n);
inline int formula_size(const Formula& f) { return formula_size(f.root); }

bool has_quantifier(const NodePtr& n);
void collect_free(const NodePtr& n, std::vector<int>& out);
void collect_atoms(const NodePtr& n, std::vector<NodePtr>& out);
int count_quantifiers(const NodePtr& n, Op q);

// Substitutes variables by terms; quantifiers binding a key are left alone.
NodePtr substitute(const NodePtr& n, const std::map<int, Term>& sub);

}  // namespace maslov
