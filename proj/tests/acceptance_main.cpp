// Release gate: one pass/fail line per criterion. Exit 0 only if all pass.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "intgeo/acceptance.hpp"

int main(int argc, char** argv) {
  intgeo::AcceptanceOptions opts;  // full profile by default
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) {
      opts.full = false;
    } else if (!std::strcmp(argv[i], "--full")) {
      opts.full = true;
    } else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) {
      opts.seed = std::strtoull(argv[++i], nullptr, 10);
    } else if (!std::strcmp(argv[i], "--threads") && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--quick|--full] [--seed N] [--threads N]\n";
      return 2;
    }
  }

  const auto outcomes = intgeo::run_acceptance(opts, std::cout);
  int passed = 0;
  for (const auto& outcome : outcomes) passed += outcome.passed ? 1 : 0;
  std::cout << passed << "/" << outcomes.size() << " criteria passed ("
            << (opts.full ? "full" : "quick") << " profile)\n";
  return intgeo::acceptance_passed(outcomes) ? 0 : 1;
}
