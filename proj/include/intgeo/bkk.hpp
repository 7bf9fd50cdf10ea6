#pragma once

#include <cstdint>
#include <vector>

#include "intgeo/finsler.hpp"
#include "intgeo/roots.hpp"

namespace intgeo {

// Random-system ensemble: per trial, equation i is  <u_i, theta_i(x)> = a_i
// with (u_i, a_i) drawn from the invariant hyperplane measure on the i-th
// coefficient space, independently across i.
struct BkkExperiment {
  std::vector<FunctionSpace> spaces;  // n spaces sharing an n-dim chart
  std::int64_t trials = 100000;
  std::vector<double> ranges;    // per-space offset ranges; empty = auto
  double range_margin = 0.01;    // inflation over the gridded sup |theta_i|
  int resolution = 0;            // root-scan cells per axis; 0 = default
  std::vector<int> quad_nodes;   // quadrature nodes per axis; empty = default
  std::uint64_t seed = 0;
  int threads = 1;
  int max_redraws = 64;
  RootOptions roots;
};

struct BkkMcResult {
  double average = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t redraws = 0;
  std::int64_t inconclusive_cells = 0;
};

// The three independent routes to the same number, and their pairwise gaps.
struct BkkReport {
  BkkMcResult mc;
  double density_average = 0.0;
  double mixed_volume_average = 0.0;
  std::vector<double> ranges;
  double gap_mc_density = 0.0;
  double gap_mc_mixedvol = 0.0;
  double gap_density_mixedvol = 0.0;
  std::uint64_t seed = 0;
};

// (1 + margin) times the gridded sup of |theta_i| per space.
std::vector<double> auto_ranges(const std::vector<FunctionSpace>& spaces,
                                double margin);

// Weighted Monte Carlo average of the root count over the hyperplane
// ensemble.
BkkMcResult average_zeros_mc(const BkkExperiment& experiment);

// Quadrature of 2^{-n} product_d1(E_1(x), ..., E_n(x)) on the standard
// frame.
double average_zeros_density(const BkkExperiment& experiment);

// (n!/2^n) times the mixed symplectic volume of the Finsler ellipsoids.
double average_zeros_mixedvol(const BkkExperiment& experiment);

// All three in one seeded run.
BkkReport run_bkk(const BkkExperiment& experiment);

}  // namespace intgeo
