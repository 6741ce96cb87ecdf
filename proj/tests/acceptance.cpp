// Acceptance battery: one pass/fail line per criterion, nonzero exit on any
// failure. The same battery backs the CLI selftest verb.

#include "schurlab/selftest.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::uint64_t seed = 0;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  const auto results = schurlab::selftest::run_acceptance(seed, &std::cout);
  int failures = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failures;
  }
  std::cout << (failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
            << results.size() - failures << "/" << results.size() << " criteria)\n";
  return failures == 0 ? 0 : 1;
}
