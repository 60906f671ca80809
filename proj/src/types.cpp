#include "maslov/types.hpp"

#include <algorithm>
#include <numeric>

namespace maslov {

Structure make_type(const Signature& sig, int k, TypeKind kind) {
  Structure t(sig, k, false);
  std::vector<int> full(k);
  std::iota(full.begin(), full.end(), 1);
  if (kind == TypeKind::Hull) {
    t.defined.insert(full);
    return t;
  }
  t.defined.insert(std::vector<int>{});
  for (int i = 1; i <= k; ++i) t.defined.insert({i});
  t.defined.insert(full);
  return t;
}

Structure restrict_type(const Structure& S, const std::vector<int>& a, TypeKind kind) {
  int k = static_cast<int>(a.size());
  for (int i = 0; i < k; ++i) {
    if (a[i] < 1 || a[i] > S.unnamed) throw std::invalid_argument("element out of range");
    for (int j = 0; j < i; ++j)
      if (a[i] == a[j]) throw std::invalid_argument("repeated element in tuple");
  }
  Structure t = make_type(S.sig, k, kind);
  if (!S.total) {
    for (auto& d : t.defined) {
      std::vector<int> img;
      for (int i : d) img.push_back(a[i - 1]);
      std::sort(img.begin(), img.end());
      if (!S.defined.count(img)) throw UndefinedAtom("restriction needs undefined atoms");
    }
  }
  std::vector<int> pos(S.unnamed + 1, 0);
  for (int i = 0; i < k; ++i) pos[a[i]] = i + 1;
  for (int r = 0; r < S.sig.num_relations(); ++r) {
    const TupleSet& ts = S.rels[r];
    Tuple m(ts.arity());
    for (size_t x = 0; x < ts.size(); ++x) {
      const int* u = ts.raw(x);
      bool inside = true;
      for (int i = 0; i < ts.arity() && inside; ++i) {
        if (is_const(u[i])) {
          m[i] = u[i];
        } else {
          m[i] = pos[u[i]];
          inside = m[i] != 0;
        }
      }
      if (inside && t.defined.count(unnamed_set(m))) t.rels[r].insert(m);
    }
  }
  return t;
}

Structure outer_type_of(const Structure& A, const std::vector<int>& a) {
  return restrict_type(A, a, TypeKind::Outer);
}
Structure one_type_of(const Structure& S, int e) { return restrict_type(S, {e}, TypeKind::Outer); }
Structure zero_type_of(const Structure& S) { return restrict_type(S, {}, TypeKind::Outer); }
Structure hull_type_of(const Structure& S, const std::vector<int>& a) {
  return restrict_type(S, a, TypeKind::Hull);
}

Structure permute_type(const Structure& t, const std::vector<int>& perm) {
  int k = t.unnamed;
  std::vector<int> newpos(k + 1, 0);
  for (int i = 0; i < k; ++i) newpos[perm[i] + 1] = i + 1;
  Structure out(t.sig, k, t.total);
  for (auto& d : t.defined) {
    std::vector<int> nd;
    for (int e : d) nd.push_back(newpos[e]);
    std::sort(nd.begin(), nd.end());
    out.defined.insert(nd);
  }
  for (int r = 0; r < t.sig.num_relations(); ++r) {
    const TupleSet& ts = t.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple m = ts.at(x);
      for (int& e : m)
        if (e > 0) e = newpos[e];
      out.rels[r].insert(m);
    }
  }
  return out;
}

bool OuterTypeSet::insert(Structure t) {
  auto key = std::make_pair(t.unnamed, t.key());
  if (pos_.count(key)) return false;
  max_grade = std::max(max_grade, t.unnamed);
  pos_[key] = members.size();
  members.push_back(std::move(t));
  return true;
}

void OuterTypeSet::normalize() {
  std::vector<Structure> sorted;
  for (auto& [k, i] : pos_) sorted.push_back(std::move(members[i]));
  members = std::move(sorted);
  size_t i = 0;
  for (auto& kv : pos_) kv.second = i++;
}

bool OuterTypeSet::contains(const Structure& t) const { return pos_.count({t.unnamed, t.key()}) > 0; }

std::vector<const Structure*> OuterTypeSet::of_grade(int k) const {
  std::vector<const Structure*> out;
  for (auto& m : members)
    if (m.unnamed == k) out.push_back(&m);
  return out;
}

std::vector<Structure> OuterTypeSet::ones() const {
  std::vector<Structure> out;
  for (auto& m : members)
    if (m.unnamed == 1) out.push_back(m);
  return out;
}

Structure augment(const Structure& A, int copies) {
  if (!A.total) throw std::invalid_argument("augment needs a total structure");
  int C = A.sig.num_constants();
  int base = C + A.unnamed;
  Structure B(A.sig, base * copies, true);
  // original element -> its unnamed copies in B
  auto copy_of = [&](int e, int c) {
    int o = is_const(e) ? const_of(e) : C + e - 1;
    return c * base + o + 1;
  };
  for (int r = 0; r < A.sig.num_relations(); ++r) {
    const TupleSet& ts = A.rels[r];
    int ar = ts.arity();
    for (size_t x = 0; x < ts.size(); ++x) {
      const int* u = ts.raw(x);
      std::vector<std::vector<int>> choices(ar);
      for (int i = 0; i < ar; ++i) {
        if (is_const(u[i])) choices[i].push_back(u[i]);
        for (int c = 0; c < copies; ++c) choices[i].push_back(copy_of(u[i], c));
      }
      std::vector<size_t> idx(ar, 0);
      Tuple t(ar);
      while (true) {
        for (int i = 0; i < ar; ++i) t[i] = choices[i][idx[i]];
        B.rels[r].insert(t);
        int i = ar - 1;
        while (i >= 0 && ++idx[i] == choices[i].size()) idx[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return B;
}

namespace {

using AtomList = std::vector<std::pair<int, Tuple>>;

std::map<std::vector<int>, AtomList> index_by_unnamed(const Structure& A, size_t max_size) {
  std::map<std::vector<int>, AtomList> idx;
  for (int r = 0; r < A.sig.num_relations(); ++r) {
    const TupleSet& ts = A.rels[r];
    for (size_t x = 0; x < ts.size(); ++x) {
      Tuple t = ts.at(x);
      auto s = unnamed_set(t);
      if (s.size() <= max_size) idx[s].push_back({r, std::move(t)});
    }
  }
  return idx;
}

}  // namespace

OuterTypeSet extract_type_set(const Structure& A, int G) {
  if (!A.total) throw std::invalid_argument("extract_type_set needs a total structure");
  OuterTypeSet beta;
  beta.sig = A.sig;
  beta.max_grade = G;
  auto idx = index_by_unnamed(A, static_cast<size_t>(G));
  int top = std::min(G, A.unnamed);
  for (int g = 0; g <= top; ++g) {
    std::vector<int> a(g, 1);
    auto distinct = [&] {
      for (int i = 0; i < g; ++i)
        for (int j = 0; j < i; ++j)
          if (a[i] == a[j]) return false;
      return true;
    };
    while (true) {
      if (distinct()) {
        Structure t = make_type(A.sig, g, TypeKind::Outer);
        std::vector<int> pos(A.unnamed + 1, 0);
        for (int i = 0; i < g; ++i) pos[a[i]] = i + 1;
        std::vector<std::vector<int>> keys{{}};
        for (int e : a) keys.push_back({e});
        if (g >= 2) {
          auto s = a;
          std::sort(s.begin(), s.end());
          keys.push_back(s);
        }
        for (auto& key : keys) {
          auto it = idx.find(key);
          if (it == idx.end()) continue;
          for (auto& [r, u] : it->second) {
            Tuple m = u;
            for (int& e : m)
              if (e > 0) e = pos[e];
            t.rels[r].insert(m);
          }
        }
        beta.insert(std::move(t));
      }
      int i = g - 1;
      while (i >= 0 && ++a[i] > A.unnamed) a[i--] = 1;
      if (i < 0) break;
    }
  }
  beta.max_grade = G;
  beta.normalize();
  return beta;
}

ClosureReport check_closed(const OuterTypeSet& beta, int G) {
  ClosureReport rep;
  std::string zero;
  for (auto& m : beta.members) {
    std::string z = zero_type_of(m).key();
    if (zero.empty()) {
      zero = z;
    } else if (z != zero) {
      rep.consistent = false;
      rep.violations.push_back("0-type clash in member " + m.key());
    }
  }
  for (auto& m : beta.members) {
    for (int i = 1; i <= m.unnamed && m.unnamed >= 2; ++i) {
      if (!beta.contains(one_type_of(m, i))) {
        rep.projections = false;
        rep.violations.push_back("projection " + std::to_string(i) + " missing for " + m.key());
      }
    }
    if (m.unnamed >= 2 && m.unnamed <= 7) {
      std::vector<int> perm(m.unnamed);
      std::iota(perm.begin(), perm.end(), 0);
      while (std::next_permutation(perm.begin(), perm.end())) {
        if (!beta.contains(permute_type(m, perm))) {
          rep.permutations = false;
          rep.violations.push_back("permutation missing for " + m.key());
          break;
        }
      }
    }
  }
  TypeIndex ix(beta);
  if (beta.of_grade(0).empty()) {
    rep.extensions = false;
    rep.violations.push_back("no 0-type");
  }
  int n = static_cast<int>(ix.ones.size());
  if (G >= 1 && n == 0) {
    rep.extensions = false;
    rep.violations.push_back("no 1-types");
  }
  for (int k = 2; k <= G && n > 0; ++k) {
    std::vector<int> seq(k, 0);
    while (true) {
      if (!ix.by_ones.count(seq)) {
        rep.extensions = false;
        std::string s;
        for (int x : seq) s += std::to_string(x) + ",";
        rep.violations.push_back("1-type sequence <" + s + "> has no outer-type of grade " + std::to_string(k));
      }
      int i = k - 1;
      while (i >= 0 && ++seq[i] == n) seq[i--] = 0;
      if (i < 0) break;
    }
  }
  return rep;
}

TypeIndex::TypeIndex(const OuterTypeSet& beta) {
  ones = beta.ones();
  for (size_t i = 0; i < ones.size(); ++i) one_id[ones[i].key()] = static_cast<int>(i);
  for (auto& m : beta.members) by_ones[one_ids(m)].push_back(&m);
}

int TypeIndex::id_of_one(const Structure& one) const {
  auto it = one_id.find(one.key());
  return it == one_id.end() ? -1 : it->second;
}

std::vector<int> TypeIndex::one_ids(const Structure& outer) const {
  std::vector<int> ids;
  for (int i = 1; i <= outer.unnamed; ++i) ids.push_back(id_of_one(one_type_of(outer, i)));
  return ids;
}

}  // namespace maslov
