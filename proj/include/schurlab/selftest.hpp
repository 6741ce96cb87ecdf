#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace schurlab::selftest {

struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs the full acceptance battery, one entry per criterion, printing one
// pass/fail line per criterion to log when given.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, std::ostream* log);

}  // namespace schurlab::selftest
