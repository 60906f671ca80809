#pragma once

#include <cstdint>

#include "maslov/structure.hpp"

namespace maslov {

enum class SearchVerdict { Sat, NoneUpTo, BudgetExhausted };

struct SearchResult {
  SearchVerdict verdict = SearchVerdict::NoneUpTo;
  Structure model;
  int bound = 0;
  uint64_t nodes = 0;
};

// Backtracking over total structures of unnamed size 1..N. Atoms are decided in
// signature order, tuples lexicographic (constants first), false before true.
SearchResult bounded_model_search(const Formula& phi, int N, uint64_t budget = 10000000);

}  // namespace maslov
