#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "intgeo/density.hpp"
#include "intgeo/rng.hpp"

using intgeo::CenteredEllipsoid;
using intgeo::DensityOptions;
using intgeo::Frame;
using intgeo::ProductStructure;

namespace {

const double kPi = 3.14159265358979323846;

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

CenteredEllipsoid random_body(int dim, intgeo::RngStream& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
  return CenteredEllipsoid(Eigen::MatrixXd(a.transpose() * a));
}

}  // namespace

TEST_CASE("first density") {
  const auto ball = CenteredEllipsoid::unit_ball(2);
  CHECK(intgeo::d1(ball, vec2(1, 0)).value == doctest::Approx(2.0));
  CHECK(intgeo::d1(ball, vec2(3, 4)).value == doctest::Approx(10.0));
  CHECK(intgeo::d1(ball, vec2(0, 0)).value == doctest::Approx(0.0));
  CHECK(intgeo::d1(ball, vec2(1, 0)).order == 1);

  const auto segment = CenteredEllipsoid::segment(vec2(1, 0));
  CHECK(intgeo::d1(segment, vec2(0, 1)).value == doctest::Approx(0.0));
  CHECK(intgeo::d1(segment, vec2(0.5, 3)).value == doctest::Approx(1.0));

  Eigen::VectorXd xi3(3);
  xi3 << 1, 0, 0;
  CHECK_THROWS_AS(intgeo::d1(ball, xi3), std::invalid_argument);
}

TEST_CASE("mixed density examples") {
  const DensityOptions exact;

  // m = 1 reduces to d1: the projected 1-volume is 2 h(xi).
  const auto ball = CenteredEllipsoid::unit_ball(2);
  const Frame one(2, {vec2(2, 0)});
  const double dm1 = intgeo::mixed_density({ball}, one, exact).value;
  CHECK(dm1 == doctest::Approx(intgeo::d1(ball, vec2(2, 0)).value));

  // Orthogonal segments on the standard frame: the projected mixed volume
  // is half the area of the unit square.
  const std::vector<CenteredEllipsoid> segments{
      CenteredEllipsoid::segment(vec2(1, 0)), CenteredEllipsoid::segment(vec2(0, 1))};
  const Frame std2 = Frame::standard(2, 2);
  CHECK(intgeo::mixed_density(segments, std2, exact).value ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(intgeo::product_d1(segments, std2, exact).value ==
        doctest::Approx(4.0).epsilon(1e-12));

  // Two discs: d_2 = kappa_2, so the d1 product is 2 pi.
  const std::vector<CenteredEllipsoid> balls(2, CenteredEllipsoid::unit_ball(2));
  CHECK(intgeo::mixed_density(balls, std2, exact).value ==
        doctest::Approx(kPi).epsilon(1e-4));
  CHECK(intgeo::product_d1(balls, std2, exact).value ==
        doctest::Approx(2.0 * kPi).epsilon(1e-4));

  // Three balls in R^3: product_d1 = 3! kappa_3 = 8 pi.
  const std::vector<CenteredEllipsoid> balls3(3, CenteredEllipsoid::unit_ball(3));
  const Frame std3 = Frame::standard(3, 3);
  CHECK(intgeo::product_d1(balls3, std3, exact).value ==
        doctest::Approx(8.0 * kPi).epsilon(0.01));

  CHECK(intgeo::product_d1(balls, std2, exact).order == 2);
}

TEST_CASE("degenerate frames vanish exactly") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 2, 0;
  b << 2, 4, 0;
  const Frame dep(3, {a, b});
  const std::vector<CenteredEllipsoid> bodies(2, CenteredEllipsoid::unit_ball(3));
  CHECK(intgeo::mixed_density(bodies, dep, DensityOptions{}).value == 0.0);
}

TEST_CASE("frame homogeneity and basis invariance") {
  intgeo::RngStream rng(91, 0);
  const std::vector<CenteredEllipsoid> bodies{random_body(3, rng), random_body(3, rng)};
  const Eigen::VectorXd xi1 = rng.gaussian_vector(3);
  const Eigen::VectorXd xi2 = rng.gaussian_vector(3);
  const DensityOptions exact;

  const double base =
      intgeo::product_d1(bodies, Frame(3, {xi1, xi2}), exact).value;

  // |t|-homogeneity in each frame slot.
  const double scaled =
      intgeo::product_d1(bodies, Frame(3, {-2.5 * xi1, xi2}), exact).value;
  CHECK(scaled == doctest::Approx(2.5 * base).epsilon(1e-4));

  // d_m depends on the frame only through its wedge, so a shear is invisible.
  // Sheared frame coordinates make the projected ellipses eccentric; a dense
  // direction fan keeps the polygon deficit below the comparison tolerance.
  DensityOptions fine;
  fine.directions = 20000;
  const double wedge_base =
      intgeo::mixed_density(bodies, Frame(3, {xi1, xi2}), fine).value;
  const double sheared =
      intgeo::mixed_density(bodies, Frame(3, {xi1 + xi2, xi2}), fine).value;
  CHECK(sheared == doctest::Approx(wedge_base).epsilon(1e-4));

  // Symmetry in the bodies.
  const std::vector<CenteredEllipsoid> swapped{bodies[1], bodies[0]};
  const double mirrored =
      intgeo::mixed_density(swapped, Frame(3, {xi1, xi2}), exact).value;
  CHECK(mirrored == doctest::Approx(intgeo::mixed_density(bodies, Frame(3, {xi1, xi2}),
                                                          exact).value)
                        .epsilon(1e-9));
}

TEST_CASE("product rule on direct summands") {
  for (int k = 0; k < 10; ++k) {
    intgeo::RngStream rng(777, static_cast<std::uint64_t>(k));
    const int m = 2 + (k % 2);
    std::vector<int> dims;
    for (int i = 0; i < m; ++i) dims.push_back(rng.uniform() < 0.5 ? 1 : 2);
    const ProductStructure product(dims);
    const int ambient = product.ambient_dim();

    std::vector<CenteredEllipsoid> bodies;
    std::vector<Eigen::VectorXd> frame_vectors;
    double expected = 1.0;
    for (int i = 0; i < m; ++i) {
      const int f = dims[static_cast<std::size_t>(i)];
      const int off = product.factor_offset(i);
      Eigen::MatrixXd g(f, f);
      for (int r = 0; r < f; ++r)
        for (int s = 0; s < f; ++s) g(r, s) = rng.normal();
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(ambient, ambient);
      q.block(off, off, f, f) = g.transpose() * g;
      bodies.emplace_back(q);

      Eigen::VectorXd part;
      do {
        part = rng.gaussian_vector(f);
      } while (part.norm() < 0.3);
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(ambient);
      xi.segment(off, f) = part;
      frame_vectors.push_back(xi);
      expected *= intgeo::d1(bodies.back(), xi).value;
    }

    const double got =
        intgeo::product_d1(bodies, Frame(ambient, frame_vectors), DensityOptions{})
            .value;
    CHECK(got == doctest::Approx(expected).epsilon(0.01));
  }
}

TEST_CASE("monte carlo fallback") {
  const std::vector<CenteredEllipsoid> balls(2, CenteredEllipsoid::unit_ball(2));
  DensityOptions mc;
  mc.exact = false;
  mc.trials = 200000;
  mc.seed = 12;
  const double v = intgeo::mixed_density(balls, Frame::standard(2, 2), mc).value;
  CHECK(v == doctest::Approx(kPi).epsilon(0.02));

  // Same options twice: deterministic.
  const double again = intgeo::mixed_density(balls, Frame::standard(2, 2), mc).value;
  CHECK(v == again);
}

TEST_CASE("product structure") {
  const ProductStructure product({2, 2});
  CHECK(product.factor_count() == 2);
  CHECK(product.ambient_dim() == 4);
  CHECK(product.factor_offset(1) == 2);

  Eigen::VectorXd xi(4);
  xi << 3, 4, 0, 0;
  CHECK(intgeo::vol1_factor(product, 0, xi).value == doctest::Approx(5.0));
  CHECK(intgeo::vol1_factor(product, 1, xi).value == doctest::Approx(0.0));

  // vol1 coincides with half the d1 of the embedded factor ball.
  const auto ball0 = product.embedded_unit_ball(0);
  CHECK(ball0.dim() == 4);
  CHECK(2.0 * intgeo::vol1_factor(product, 0, xi).value ==
        doctest::Approx(intgeo::d1(ball0, xi).value));

  CHECK_THROWS_AS(intgeo::vol1_factor(product, 2, xi), std::invalid_argument);
  CHECK_THROWS_AS(product.component(0, vec2(1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(ProductStructure({2, 0}), std::invalid_argument);
}

TEST_CASE("argument validation") {
  const std::vector<CenteredEllipsoid> balls(2, CenteredEllipsoid::unit_ball(3));
  CHECK_THROWS_AS(
      intgeo::mixed_density(balls, Frame::standard(3, 1), DensityOptions{}),
      std::invalid_argument);
  const std::vector<CenteredEllipsoid> wrong{CenteredEllipsoid::unit_ball(3),
                                             CenteredEllipsoid::unit_ball(2)};
  CHECK_THROWS_AS(
      intgeo::mixed_density(wrong, Frame::standard(3, 2), DensityOptions{}),
      std::invalid_argument);
}
