#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "intgeo/bkk.hpp"

using intgeo::BkkExperiment;
using intgeo::BkkReport;
using intgeo::ChartDomain;
using intgeo::FunctionSpace;
using intgeo::TrigMode;

namespace {

const double kPi = 3.14159265358979323846;

TrigMode mode1(int k, bool sine) {
  TrigMode m;
  m.wave = Eigen::VectorXi::Constant(1, k);
  m.sine = sine;
  return m;
}

TrigMode mode2(int k1, int k2, bool sine) {
  TrigMode m;
  m.wave.resize(2);
  m.wave << k1, k2;
  m.sine = sine;
  return m;
}

FunctionSpace circle_space() {
  return intgeo::trig_space(ChartDomain::torus(1), {mode1(1, false), mode1(1, true)});
}

BkkExperiment circle_experiment(std::uint64_t seed, std::int64_t trials) {
  BkkExperiment e;
  e.spaces = {circle_space()};
  e.trials = trials;
  e.seed = seed;
  return e;
}

BkkExperiment decoupled_experiment(std::uint64_t seed, std::int64_t trials) {
  const ChartDomain t2 = ChartDomain::torus(2);
  BkkExperiment e;
  e.spaces = {intgeo::trig_space(t2, {mode2(1, 0, false), mode2(1, 0, true)}),
              intgeo::trig_space(t2, {mode2(0, 1, false), mode2(0, 1, true)})};
  e.trials = trials;
  e.seed = seed;
  return e;
}

// Same span, every basis function multiplied by lambda.
FunctionSpace scale_space(const FunctionSpace& space, double lambda) {
  std::vector<intgeo::BasisFunction> basis;
  for (const auto& b : space.basis()) {
    intgeo::BasisFunction f;
    f.name = b.name;
    auto value = b.value;
    auto gradient = b.gradient;
    f.value = [value, lambda](const Eigen::VectorXd& x) { return lambda * value(x); };
    f.gradient = [gradient, lambda](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(lambda * gradient(x));
    };
    basis.push_back(std::move(f));
  }
  return FunctionSpace(space.domain(), std::move(basis));
}

}  // namespace

TEST_CASE("circle space: all three routes give 2 pi") {
  const BkkReport r = intgeo::run_bkk(circle_experiment(17, 30000));
  CHECK(std::abs(r.mc.average - 2.0 * kPi) <= 3.0 * r.mc.std_error + 1e-3);
  CHECK(r.density_average == doctest::Approx(2.0 * kPi).epsilon(1e-3));
  CHECK(r.mixed_volume_average == doctest::Approx(2.0 * kPi).epsilon(1e-3));
  CHECK(r.mc.trials == 30000);
  CHECK(r.seed == 17);
  REQUIRE(r.ranges.size() == 1);
  CHECK(r.ranges[0] == doctest::Approx(1.01));
  CHECK(r.gap_mc_density >= 0.0);
  CHECK(r.mc.inconclusive_cells == 0);
}

TEST_CASE("decoupled torus: 4 pi^2") {
  const BkkReport r = intgeo::run_bkk(decoupled_experiment(23, 10000));
  const double target = 4.0 * kPi * kPi;
  CHECK(std::abs(r.mc.average - target) <= 3.0 * r.mc.std_error + 0.01 * target);
  CHECK(r.density_average == doctest::Approx(target).epsilon(1e-6));
  CHECK(r.mixed_volume_average == doctest::Approx(target).epsilon(1e-6));
  CHECK(r.gap_density_mixedvol <= 1e-6);
}

TEST_CASE("constant spaces have no roots") {
  BkkExperiment e;
  e.spaces = {intgeo::constant_space(ChartDomain::torus(1))};
  e.trials = 2000;
  e.seed = 3;
  const BkkReport r = intgeo::run_bkk(e);
  CHECK(r.mc.average == 0.0);
  CHECK(r.density_average == 0.0);
  CHECK(r.mixed_volume_average == 0.0);
}

TEST_CASE("scale covariance") {
  // Doubling the space doubles all three outputs bitwise: every quantity
  // in the pipeline scales by an exact power of two.
  const BkkReport base = intgeo::run_bkk(circle_experiment(9, 4000));
  BkkExperiment scaled = circle_experiment(9, 4000);
  scaled.spaces = {scale_space(circle_space(), 2.0)};
  const BkkReport doubled = intgeo::run_bkk(scaled);
  CHECK(std::abs(doubled.mc.average - 2.0 * base.mc.average) <=
        1e-12 * base.mc.average);
  CHECK(std::abs(doubled.density_average - 2.0 * base.density_average) <=
        1e-12 * base.density_average);
  CHECK(std::abs(doubled.mixed_volume_average - 2.0 * base.mixed_volume_average) <=
        1e-12 * base.mixed_volume_average);
}

TEST_CASE("range invariance") {
  BkkExperiment a = circle_experiment(41, 20000);
  a.ranges = {1.5};
  BkkExperiment b = circle_experiment(42, 20000);
  b.ranges = {3.0};
  const auto ra = intgeo::average_zeros_mc(a);
  const auto rb = intgeo::average_zeros_mc(b);
  CHECK(std::abs(ra.average - rb.average) <=
        3.0 * std::hypot(ra.std_error, rb.std_error));

  // The deterministic routes do not depend on the range at all.
  CHECK(intgeo::average_zeros_density(a) ==
        doctest::Approx(intgeo::average_zeros_density(b)).epsilon(1e-14));
}

TEST_CASE("determinism and thread independence") {
  const auto r1 = intgeo::average_zeros_mc(circle_experiment(55, 5000));
  const auto r2 = intgeo::average_zeros_mc(circle_experiment(55, 5000));
  CHECK(r1.average == r2.average);
  CHECK(r1.std_error == r2.std_error);

  BkkExperiment threaded = circle_experiment(55, 5000);
  threaded.threads = 3;
  const auto r3 = intgeo::average_zeros_mc(threaded);
  CHECK(r1.average == r3.average);
  CHECK(r1.std_error == r3.std_error);

  const auto other = intgeo::average_zeros_mc(circle_experiment(56, 5000));
  CHECK(r1.average != other.average);
}

TEST_CASE("auto ranges") {
  const auto r = intgeo::auto_ranges({circle_space()}, 0.01);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == doctest::Approx(1.01));
  CHECK_THROWS_AS(intgeo::auto_ranges({circle_space()}, 0.001),
                  std::invalid_argument);
  CHECK_THROWS_AS(intgeo::auto_ranges({}, 0.01), std::invalid_argument);
}

TEST_CASE("argument validation") {
  BkkExperiment few = circle_experiment(1, 500);
  CHECK_THROWS_AS(intgeo::run_bkk(few), std::invalid_argument);

  BkkExperiment low_range = circle_experiment(1, 2000);
  low_range.ranges = {0.9};
  CHECK_THROWS_AS(intgeo::run_bkk(low_range), std::invalid_argument);

  BkkExperiment tight_margin = circle_experiment(1, 2000);
  tight_margin.range_margin = 0.001;
  CHECK_THROWS_AS(intgeo::run_bkk(tight_margin), std::invalid_argument);

  BkkExperiment wrong_count;
  wrong_count.spaces = {intgeo::trig_space(ChartDomain::torus(2),
                                           {mode2(1, 0, false), mode2(1, 0, true)})};
  wrong_count.trials = 2000;
  CHECK_THROWS_AS(intgeo::run_bkk(wrong_count), std::invalid_argument);

  BkkExperiment mixed_domains = decoupled_experiment(1, 2000);
  mixed_domains.spaces[1] = intgeo::trig_space(
      ChartDomain::torus(2, {1.0, 1.0}), {mode2(0, 1, false), mode2(0, 1, true)});
  CHECK_THROWS_AS(intgeo::run_bkk(mixed_domains), std::invalid_argument);

  BkkExperiment coarse = circle_experiment(1, 2000);
  coarse.resolution = 32;
  CHECK_THROWS_AS(intgeo::run_bkk(coarse), std::invalid_argument);

  BkkExperiment bad_nodes = circle_experiment(1, 2000);
  bad_nodes.quad_nodes = {64, 64};
  CHECK_THROWS_AS(intgeo::run_bkk(bad_nodes), std::invalid_argument);
}
