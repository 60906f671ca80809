#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maslov/jsonio.hpp"

namespace maslov {

struct AcceptanceConfig {
  uint64_t seed = 1;
  int jobs = 1;
  uint64_t budget = 10000000;
  int max_size = 4;
  // Primes for the Paley row; set to a non-prime to see that row fail on its own.
  uint64_t paley_small = 7;
  uint64_t paley_extension = 67;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

// Runs one criterion (1..10); exceptions become a failing row with the message as detail.
CriterionResult run_criterion(int id, const AcceptanceConfig& cfg);
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg);

// Text table, one "PASS|FAIL <id> <name>: <detail>" line per row.
std::string acceptance_text(const std::vector<CriterionResult>& rows);
// {"seed", "all_pass", "criteria": [{"id", "name", "pass", "detail"}]}; timings are left out so
// equal seeds give equal bytes.
Json acceptance_json(const std::vector<CriterionResult>& rows, const AcceptanceConfig& cfg);

// Named sentences used by the suite and the CLI corpus listing.
struct CorpusEntry {
  std::string name;
  std::string text;
};
const std::vector<CorpusEntry>& named_corpus();
std::string corpus_text(const std::string& name);  // throws if unknown

}  // namespace maslov
