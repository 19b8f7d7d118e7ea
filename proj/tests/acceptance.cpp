// Standalone acceptance gate: one [PASS]/[FAIL] line per criterion,
// exit code 0 only when every criterion holds.

#include "igc/acceptance.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  const std::vector<igc::CriterionResult> results = igc::run_acceptance(quick);
  igc::print_acceptance(results, std::cout);
  return igc::acceptance_pass(results) ? 0 : 1;
}
