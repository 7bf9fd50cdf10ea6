#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace intgeo {

struct AcceptanceOptions {
  bool full = true;  // full runs the stated trial counts; quick scales down
  std::uint64_t seed = 20260819;
  int threads = 1;
};

struct CriterionOutcome {
  int index = 0;
  std::string label;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> checks;  // one "ok/FAIL" line per sub-check
};

// Runs the nine release criteria, logging one pass/fail line per criterion
// (failed sub-checks are echoed indented).
std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opts,
                                             std::ostream& log);

bool acceptance_passed(const std::vector<CriterionOutcome>& outcomes);

}  // namespace intgeo
