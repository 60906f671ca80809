#include "maslov/jsonio.hpp"

#include <stdexcept>

namespace maslov {

namespace {

Json element_json(const Signature& sig, int e) {
  if (is_const(e)) return sig.constants[const_of(e)];
  return e;
}

int element_from(const Json& v, const Signature& sig, int k) {
  if (v.is_string()) {
    int c = sig.constant_index(v.get<std::string>());
    if (c < 0) throw std::invalid_argument("unknown constant " + v.get<std::string>());
    return const_elem(c);
  }
  int e = v.get<int>();
  if (e < 1 || e > k) throw std::invalid_argument("element " + std::to_string(e) + " out of range");
  return e;
}

}  // namespace

Json structure_to_json(const Structure& A) {
  Json j;
  j["constants"] = A.sig.constants;
  j["unnamed"] = A.unnamed;
  Json ar = Json::object(), rels = Json::object();
  for (int r = 0; r < A.sig.num_relations(); ++r) {
    ar[A.sig.rel_names[r]] = A.sig.arities[r];
    Json ts = Json::array();
    for (auto& t : A.rels[r].sorted()) {
      Json row = Json::array();
      for (int e : t) row.push_back(element_json(A.sig, e));
      ts.push_back(row);
    }
    rels[A.sig.rel_names[r]] = ts;
  }
  j["arities"] = ar;
  j["relations"] = rels;
  if (!A.total) {
    Json d = Json::array();
    for (auto& s : A.defined) d.push_back(s);
    j["defined"] = d;
  }
  return j;
}

Structure structure_from_json(const Json& j, const Signature* sig) {
  Signature s;
  if (sig) {
    s = *sig;
  } else {
    for (auto& c : j.value("constants", Json::array())) s.add_constant(c.get<std::string>());
    const Json& rels = j.at("relations");
    for (auto it = rels.begin(); it != rels.end(); ++it) {
      int ar = -1;
      if (j.contains("arities") && j["arities"].contains(it.key())) ar = j["arities"][it.key()].get<int>();
      else if (!it.value().empty()) ar = static_cast<int>(it.value()[0].size());
      if (ar < 0) throw std::invalid_argument("cannot infer the arity of " + it.key());
      s.add_relation(it.key(), ar);
    }
  }
  if (j.contains("constants")) {
    std::vector<std::string> cs = j["constants"].get<std::vector<std::string>>();
    if (cs != s.constants) throw std::invalid_argument("constants differ from the signature");
  }
  int k = j.at("unnamed").get<int>();
  bool total = !j.contains("defined");
  Structure A(s, k, total);
  if (!total)
    for (auto& d : j["defined"]) A.defined.insert(d.get<std::vector<int>>());
  const Json& rels = j.at("relations");
  for (auto it = rels.begin(); it != rels.end(); ++it) {
    int r = s.relation_index(it.key());
    if (r < 0) throw std::invalid_argument("relation " + it.key() + " not in the signature");
    for (auto& row : it.value()) {
      if (static_cast<int>(row.size()) != s.arities[r]) throw std::invalid_argument("arity mismatch in " + it.key());
      Tuple t;
      for (auto& v : row) t.push_back(element_from(v, s, k));
      A.set_true(r, t);
    }
  }
  return A;
}

Json tournament_to_json(const ColourfulView& t) {
  Json j;
  int n = t.size();
  j["vertices"] = n;
  j["vertex_colours_count"] = t.num_r();
  j["arc_colours_count"] = t.num_q();
  Json mu = Json::array();
  for (int v = 0; v < n; ++v) mu.push_back(t.mu(v));
  j["vertex_colours"] = mu;
  Json arcs = Json::array();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && t.arc(u, v)) arcs.push_back({u, v, t.lambda(u, v)});
  j["arcs"] = arcs;
  return j;
}

ColourfulTournament tournament_from_json(const Json& j) {
  int n = j.at("vertices").get<int>();
  auto mu = j.at("vertex_colours").get<std::vector<int>>();
  if (static_cast<int>(mu.size()) != n) throw std::invalid_argument("vertex_colours has the wrong length");
  int num_r = 1, num_q = 1;
  for (int c : mu) num_r = std::max(num_r, c + 1);
  for (auto& a : j.at("arcs")) num_q = std::max(num_q, a.at(2).get<int>() + 1);
  num_r = j.value("vertex_colours_count", num_r);
  num_q = j.value("arc_colours_count", num_q);
  ColourfulTournament t(n, num_r, num_q);
  for (int v = 0; v < n; ++v) t.set_mu(v, mu[v]);
  for (auto& a : j.at("arcs")) {
    int u = a.at(0).get<int>(), v = a.at(1).get<int>();
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) throw std::invalid_argument("bad arc");
    t.set_arc(u, v, a.at(2).get<int>());
  }
  return t;
}

Json type_set_to_json(const OuterTypeSet& beta) {
  Json j;
  j["max_grade"] = beta.max_grade;
  Json ms = Json::array();
  for (auto& m : beta.members) ms.push_back(structure_to_json(m));
  j["members"] = ms;
  return j;
}

OuterTypeSet type_set_from_json(const Json& j, const Signature* sig) {
  OuterTypeSet b;
  b.max_grade = j.at("max_grade").get<int>();
  bool first = true;
  for (auto& m : j.at("members")) {
    Structure s = structure_from_json(m, first ? sig : &b.sig);
    if (first) b.sig = s.sig;
    first = false;
    b.insert(std::move(s));
  }
  if (first && sig) b.sig = *sig;
  b.normalize();
  return b;
}

Json position_to_json(const Position& p) {
  Json j;
  j["t"] = p.t;
  j["f"] = p.f;
  j["ones"] = p.ones;
  j["L"] = structure_to_json(p.L);
  return j;
}

Position position_from_json(const Json& j, const Signature& sig) {
  Position p;
  p.t = j.at("t").get<int>();
  p.f = j.at("f").get<std::vector<int>>();
  p.ones = j.at("ones").get<std::vector<int>>();
  p.L = structure_from_json(j.at("L"), &sig);
  return p;
}

Json strategy_to_json(const StrategyTable& w) {
  Json arr = Json::array();
  for (auto& [key, to] : w.moves) arr.push_back({{"key", key}, {"to", position_to_json(to)}});
  return arr;
}

StrategyTable strategy_from_json(const Json& j, const Signature& sig) {
  StrategyTable w;
  for (auto& e : j) w.moves.emplace(e.at("key").get<std::string>(), position_from_json(e.at("to"), sig));
  return w;
}

}  // namespace maslov
