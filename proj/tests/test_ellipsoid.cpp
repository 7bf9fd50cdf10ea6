#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "intgeo/ellipsoid.hpp"
#include "intgeo/rng.hpp"

using intgeo::CenteredEllipsoid;
using intgeo::Frame;
using intgeo::MinkowskiSum;

namespace {

const double kPi = 3.14159265358979323846;

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

}  // namespace

TEST_CASE("unit ball volumes") {
  CHECK(intgeo::unit_ball_volume(0) == doctest::Approx(1.0));
  CHECK(intgeo::unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(intgeo::unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(intgeo::unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
  CHECK_THROWS_AS(intgeo::unit_ball_volume(-1), std::invalid_argument);
}

TEST_CASE("support function basics") {
  const auto ball = CenteredEllipsoid::unit_ball(2);
  CHECK(ball.support(vec2(1, 0)) == doctest::Approx(1.0));
  CHECK(ball.support(vec2(3, 4)) == doctest::Approx(5.0));

  Eigen::MatrixXd q(2, 2);
  q << 1, 0, 0, 0;
  const CenteredEllipsoid segment(q);
  CHECK(segment.support(vec2(0, 1)) == doctest::Approx(0.0));
  CHECK(segment.support(vec2(1, 0)) == doctest::Approx(1.0));

  q << 4, 0, 0, 1;
  const CenteredEllipsoid stretched(q);
  CHECK(stretched.support(vec2(1, 1)) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("support is even, homogeneous and convex") {
  intgeo::RngStream rng(7, 0);
  Eigen::MatrixXd a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
  const CenteredEllipsoid body(Eigen::MatrixXd(a.transpose() * a));

  for (int k = 0; k < 50; ++k) {
    const Eigen::VectorXd xi = rng.gaussian_vector(3);
    const Eigen::VectorXd eta = rng.gaussian_vector(3);
    const double t = std::abs(rng.normal()) + 0.1;
    CHECK(body.support(-xi) == doctest::Approx(body.support(xi)));
    CHECK(body.support(t * xi) == doctest::Approx(t * body.support(xi)));
    CHECK(body.support(xi + eta) <= body.support(xi) + body.support(eta) + 1e-12);
  }
}

TEST_CASE("constructor validation") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, -0.5, 1;
  CHECK_THROWS_AS(CenteredEllipsoid{asym}, std::invalid_argument);

  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(CenteredEllipsoid{indef}, std::invalid_argument);

  // Rounding-level asymmetry and negative eigenvalues are absorbed.
  Eigen::MatrixXd nearly(2, 2);
  nearly << 1, 1e-13, 0, 1;
  const CenteredEllipsoid ok(nearly);
  CHECK(ok.form()(0, 1) == doctest::Approx(ok.form()(1, 0)));

  Eigen::MatrixXd tiny_neg(2, 2);
  tiny_neg << 1, 0, 0, -1e-13;
  const CenteredEllipsoid clamped(tiny_neg);
  CHECK(clamped.support(vec2(0, 1)) >= 0.0);
  CHECK(clamped.support(vec2(0, 1)) == doctest::Approx(0.0));

  CHECK_THROWS_AS(CenteredEllipsoid{Eigen::MatrixXd(0, 0)}, std::invalid_argument);
}

TEST_CASE("sqrt_form squares back to the form") {
  Eigen::MatrixXd q(2, 2);
  q << 4, 0, 0, 1;
  const CenteredEllipsoid body(q);
  const Eigen::MatrixXd a = body.sqrt_form();
  CHECK(a(0, 0) == doctest::Approx(2.0));
  CHECK(a(1, 1) == doctest::Approx(1.0));
  CHECK((a * a - q).norm() == doctest::Approx(0.0).epsilon(1e-12));

  intgeo::RngStream rng(11, 0);
  Eigen::MatrixXd g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
  const Eigen::MatrixXd form = g.transpose() * g;
  const CenteredEllipsoid random_body{Eigen::MatrixXd(form)};
  const Eigen::MatrixXd s = random_body.sqrt_form();
  CHECK((s - s.transpose()).norm() <= 1e-12 * s.norm());
  CHECK((s * s - form).norm() <= 1e-10 * form.norm());
}

TEST_CASE("volume") {
  CHECK(CenteredEllipsoid::unit_ball(2).volume() == doctest::Approx(kPi));
  CHECK(CenteredEllipsoid::unit_ball(3).volume() == doctest::Approx(4.0 * kPi / 3.0));
  // Degenerate bodies have zero m-volume.
  CHECK(CenteredEllipsoid::segment(vec2(1, 0)).volume() == doctest::Approx(0.0));
  CHECK(CenteredEllipsoid::point(3).volume() == doctest::Approx(0.0));

  Eigen::MatrixXd q(2, 2);
  q << 4, 0, 0, 9;
  CHECK(CenteredEllipsoid(q).volume() == doctest::Approx(6.0 * kPi));
}

TEST_CASE("frames") {
  const Frame std2 = Frame::standard(3, 2);
  CHECK(std2.ambient_dim() == 3);
  CHECK(std2.size() == 2);
  CHECK(std2.matrix()(0, 0) == 1.0);
  CHECK(std2.matrix()(2, 1) == 0.0);
  CHECK_FALSE(std2.degenerate());
  CHECK(std2.singular_value_ratio() == doctest::Approx(1.0));

  const Frame dep(3, {vec3(1, 2, 0), vec3(2, 4, 0)});
  CHECK(dep.degenerate());
  CHECK(dep.singular_value_ratio() == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(Frame(2, {vec3(1, 0, 0)}), std::invalid_argument);
  CHECK_THROWS_AS(Frame(Eigen::MatrixXd::Identity(2, 3)), std::invalid_argument);
}

TEST_CASE("projection") {
  const auto ball3 = CenteredEllipsoid::unit_ball(3);
  const auto shadow = ball3.project(Frame::standard(3, 2));
  CHECK(shadow.dim() == 2);
  CHECK((shadow.form() - Eigen::MatrixXd::Identity(2, 2)).norm() ==
        doctest::Approx(0.0));

  // A segment projected onto its orthogonal complement is a point.
  Eigen::MatrixXd q(2, 2);
  q << 1, 0, 0, 0;
  const CenteredEllipsoid segment(q);
  const Frame e2(2, {vec2(0, 1)});
  CHECK(segment.project(e2).form()(0, 0) == doctest::Approx(0.0));

  // Frame coordinates scale with the frame vectors: h_proj(1) = h(B * 1).
  const auto ball2 = CenteredEllipsoid::unit_ball(2);
  const Frame doubled(2, {vec2(2, 0)});
  const auto stretched = ball2.project(doubled);
  Eigen::VectorXd one(1);
  one << 1.0;
  CHECK(stretched.support(one) == doctest::Approx(ball2.support(vec2(2, 0))));

  // Projection preserves PSD-ness for random bodies and frames.
  intgeo::RngStream rng(23, 0);
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXd g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = rng.normal();
    const CenteredEllipsoid body{Eigen::MatrixXd(g.transpose() * g)};
    const Frame frame(3, {rng.gaussian_vector(3), rng.gaussian_vector(3)});
    const auto projected = body.project(frame);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(projected.form());
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * (1.0 + es.eigenvalues().maxCoeff()));
  }

  CHECK_THROWS_AS(ball2.project(Frame::standard(3, 2)), std::invalid_argument);
}

TEST_CASE("minkowski sums") {
  const auto ball = CenteredEllipsoid::unit_ball(2);
  const MinkowskiSum two_balls = intgeo::sum(ball, ball);
  CHECK(two_balls.support(vec2(1, 0)) == doctest::Approx(2.0));
  CHECK(two_balls.boundary_point(vec2(1, 0))(0) == doctest::Approx(2.0));

  const auto sx = CenteredEllipsoid::segment(vec2(1, 0));
  const auto sy = CenteredEllipsoid::segment(vec2(0, 1));
  const MinkowskiSum square = intgeo::sum(sx, sy);
  const Eigen::VectorXd diag = vec2(1, 1).normalized();
  CHECK(square.support(diag) == doctest::Approx(std::sqrt(2.0)));
  // Corner of the square: both segments contribute their endpoint.
  CHECK(square.boundary_point(diag)(0) == doctest::Approx(1.0));
  CHECK(square.boundary_point(diag)(1) == doctest::Approx(1.0));

  // Adding a point changes nothing.
  const MinkowskiSum padded = intgeo::sum(ball, CenteredEllipsoid::point(2));
  intgeo::RngStream rng(3, 0);
  for (int k = 0; k < 20; ++k) {
    const Eigen::VectorXd u = rng.unit_vector(2);
    CHECK(padded.support(u) == doctest::Approx(ball.support(u)));
  }

  CHECK_THROWS_AS(intgeo::sum(ball, CenteredEllipsoid::unit_ball(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(MinkowskiSum(std::vector<CenteredEllipsoid>{}),
                  std::invalid_argument);
}
