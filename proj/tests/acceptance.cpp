#include <cstdlib>
#include <iostream>
#include <thread>

#include "maslov/acceptance.hpp"

int main(int argc, char** argv) {
  maslov::AcceptanceConfig cfg;
  cfg.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* s = std::getenv("MASLOV_SEED")) cfg.seed = std::strtoull(s, nullptr, 10);
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all = true;
  for (int id = 1; id <= 10; ++id) {
    if (only && id != only) continue;
    auto r = maslov::run_criterion(id, cfg);
    all &= r.pass;
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.id << " " << r.name << ": " << r.detail << " ("
              << r.seconds << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
