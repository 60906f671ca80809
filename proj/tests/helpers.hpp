#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "maslov/formula.hpp"
#include "maslov/structure.hpp"

namespace maslov::testing {

// Relation facts by name; constants written as negative ints (-1 is the first constant).
inline Structure make_structure(const Signature& sig, int k,
                                const std::map<std::string, std::vector<Tuple>>& facts) {
  Structure A(sig, k, true);
  for (auto& [name, ts] : facts)
    for (auto& t : ts) A.set_true(sig.relation_index(name), t);
  return A;
}

// Every total structure over sig with k unnamed elements.
inline void for_each_structure(const Signature& sig, int k, const std::function<void(const Structure&)>& fn) {
  Structure probe(sig, k, true);
  std::vector<int> dom = probe.domain();
  std::vector<std::pair<int, Tuple>> cells;
  for (int r = 0; r < sig.num_relations(); ++r) {
    int ar = sig.arities[r];
    std::vector<size_t> idx(ar, 0);
    while (true) {
      Tuple t(ar);
      for (int i = 0; i < ar; ++i) t[i] = dom[idx[i]];
      cells.push_back({r, t});
      int i = ar - 1;
      while (i >= 0 && ++idx[i] == dom.size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  size_t n = cells.size();
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    Structure A(sig, k, true);
    for (size_t c = 0; c < n; ++c)
      if (mask >> c & 1) A.set_true(cells[c].first, cells[c].second);
    fn(A);
  }
}

}  // namespace maslov::testing
