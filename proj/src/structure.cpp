#include "maslov/structure.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

namespace maslov {

uint64_t TupleSet::hash(const int* t) const {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < arity_; ++i) {
    h ^= static_cast<uint64_t>(static_cast<uint32_t>(t[i])) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return h ^ (h >> 29);
}

bool TupleSet::contains(const int* t) const {
  if (slots_.empty()) return false;
  size_t mask = slots_.size() - 1;
  for (size_t i = hash(t) & mask;; i = (i + 1) & mask) {
    int64_t s = slots_[i];
    if (s < 0) return false;
    if (std::equal(t, t + arity_, data_.begin() + s * arity_)) return true;
  }
}

void TupleSet::grow() {
  size_t cap = slots_.empty() ? 16 : slots_.size() * 2;
  slots_.assign(cap, -1);
  for (size_t k = 0; k < count_; ++k) {
    size_t i = hash(raw(k)) & (cap - 1);
    while (slots_[i] >= 0) i = (i + 1) & (cap - 1);
    slots_[i] = static_cast<int64_t>(k);
  }
}

bool TupleSet::insert(const int* t) {
  if (contains(t)) return false;
  if ((count_ + 1) * 2 > slots_.size()) grow();
  data_.insert(data_.end(), t, t + arity_);
  size_t mask = slots_.size() - 1;
  size_t i = hash(t) & mask;
  while (slots_[i] >= 0) i = (i + 1) & mask;
  slots_[i] = static_cast<int64_t>(count_++);
  return true;
}

std::vector<Tuple> TupleSet::sorted() const {
  std::vector<Tuple> out;
  out.reserve(count_);
  for (size_t i = 0; i < count_; ++i) out.push_back(at(i));
  std::sort(out.begin(), out.end());
  return out;
}

Structure::Structure(Signature s, int k, bool is_total) : sig(std::move(s)), unnamed(k), total(is_total) {
  for (int a : sig.arities) rels.emplace_back(a);
}

std::vector<int> unnamed_set(const int* t, int n) {
  std::vector<int> s;
  for (int i = 0; i < n; ++i)
    if (t[i] > 0) s.push_back(t[i]);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

Truth Structure::truth(int rel, const int* t) const {
  if (!total && !defined.count(unnamed_set(t, rels[rel].arity()))) return Truth::Undef;
  return rels[rel].contains(t) ? Truth::True : Truth::False;
}

std::vector<int> Structure::domain() const {
  std::vector<int> d;
  for (int c = 0; c < sig.num_constants(); ++c) d.push_back(const_elem(c));
  for (int e = 1; e <= unnamed; ++e) d.push_back(e);
  return d;
}

std::string Structure::key() const {
  std::ostringstream os;
  os << unnamed << (total ? 'T' : 'P');
  if (!total) {
    os << '{';
    for (auto& s : defined) {
      os << '<';
      for (int e : s) os << e << ',';
      os << '>';
    }
    os << '}';
  }
  for (size_t r = 0; r < rels.size(); ++r) {
    os << '|';
    for (auto& t : rels[r].sorted()) {
      for (int e : t) os << e << ',';
      os << ';';
    }
  }
  return os.str();
}

std::string element_name(const Signature& sig, int e) {
  return is_const(e) ? sig.constants[const_of(e)] : std::to_string(e);
}

std::string atom_name(const Signature& sig, int rel, const Tuple& t) {
  std::string s = sig.rel_names[rel] + "(";
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + element_name(sig, t[i]);
  return s + ")";
}

namespace {

struct Checker {
  const Structure& A;
  const Formula& phi;
  std::vector<int> rel_map;
  std::vector<int> const_map;
  std::vector<int> dom;

  Checker(const Structure& a, const Formula& f) : A(a), phi(f), dom(a.domain()) {
    for (int r = 0; r < f.sig.num_relations(); ++r) {
      int ar = A.sig.relation_index(f.sig.rel_names[r]);
      if (ar < 0 || A.sig.arities[ar] != f.sig.arities[r])
        throw std::invalid_argument("structure lacks relation " + f.sig.rel_names[r]);
      rel_map.push_back(ar);
    }
    for (auto& c : f.sig.constants) {
      int ac = A.sig.constant_index(c);
      if (ac < 0) throw std::invalid_argument("structure lacks constant " + c);
      const_map.push_back(ac);
    }
  }

  bool eval(const NodePtr& n, Assignment& env) const {
    switch (n->op) {
      case Op::Atom: {
        int buf[64];
        std::vector<int> big;
        int* t = buf;
        if (n->args.size() > 64) {
          big.resize(n->args.size());
          t = big.data();
        }
        for (size_t i = 0; i < n->args.size(); ++i) {
          const Term& a = n->args[i];
          t[i] = a.is_const ? const_elem(const_map[a.id]) : env[a.id];
          if (t[i] == 0) throw std::invalid_argument("unassigned free variable " + phi.var_names[a.id]);
        }
        int r = rel_map[n->rel];
        Truth v = A.truth(r, t);
        if (v == Truth::Undef)
          throw UndefinedAtom("undefined atom " + atom_name(A.sig, r, Tuple(t, t + n->args.size())));
        return v == Truth::True;
      }
      case Op::Not:
        return !eval(n->kids[0], env);
      case Op::And:
        for (auto& k : n->kids)
          if (!eval(k, env)) return false;
        return true;
      case Op::Or:
        for (auto& k : n->kids)
          if (eval(k, env)) return true;
        return false;
      case Op::Implies:
        return !eval(n->kids[0], env) || eval(n->kids[1], env);
      case Op::Forall:
      case Op::Exists: {
        bool want = n->op == Op::Exists;
        int saved = env[n->var];
        bool result = !want;
        for (int e : dom) {
          env[n->var] = e;
          if (eval(n->kids[0], env) == want) {
            result = want;
            break;
          }
        }
        env[n->var] = saved;
        return result;
      }
    }
    return false;
  }
};

}  // namespace

bool model_check(const Structure& A, const Formula& phi, const Assignment& f, int jobs) {
  Checker c(A, phi);
  Assignment env(phi.var_names.size(), 0);
  for (size_t i = 0; i < f.size() && i < env.size(); ++i) env[i] = f[i];
  const NodePtr& n = phi.root;
  bool quant = n->op == Op::Forall || n->op == Op::Exists;
  if (jobs <= 1 || !quant || c.dom.size() < 2) return c.eval(n, env);
  // Split the outermost quantifier across workers.
  bool want = n->op == Op::Exists;
  std::atomic<bool> hit{false};
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mu;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      Assignment local = env;
      try {
        for (size_t i; !hit && (i = next++) < c.dom.size();) {
          local[n->var] = c.dom[i];
          if (c.eval(n->kids[0], local) == want) hit = true;
        }
      } catch (...) {
        std::lock_guard<std::mutex> g(err_mu);
        err = std::current_exception();
        hit = true;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return hit ? want : !want;
}

Structure reduct(const Structure& A, const Signature& sig) {
  if (sig.constants != A.sig.constants) throw std::invalid_argument("reduct must keep the constants");
  Structure B(sig, A.unnamed, A.total);
  B.defined = A.defined;
  for (int r = 0; r < sig.num_relations(); ++r) {
    int ar = A.sig.relation_index(sig.rel_names[r]);
    if (ar < 0) throw std::invalid_argument("structure lacks relation " + sig.rel_names[r]);
    const TupleSet& ts = A.rels[ar];
    for (size_t i = 0; i < ts.size(); ++i) B.rels[r].insert(ts.raw(i));
  }
  return B;
}

}  // namespace maslov
