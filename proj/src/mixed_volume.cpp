#include "intgeo/mixed_volume.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "intgeo/hull.hpp"
#include "intgeo/parallel.hpp"
#include "intgeo/rng.hpp"

namespace intgeo {

double expected_abs_gaussian_det(int m) {
  if (m < 1) throw std::invalid_argument("expected_abs_gaussian_det: m must be >= 1");
  return std::pow(2.0, 0.5 * m) * std::tgamma(0.5 * (m + 1)) /
         std::sqrt(3.14159265358979323846);
}

namespace {

void check_bodies(const std::vector<CenteredEllipsoid>& bodies) {
  if (bodies.empty()) throw std::invalid_argument("mixed_volume: no bodies");
  const int m = static_cast<int>(bodies.size());
  for (const auto& b : bodies)
    if (b.dim() != m)
      throw std::invalid_argument("mixed_volume: need m bodies of dimension m");
}

}  // namespace

MixedVolumeEstimate mixed_volume_mc(const std::vector<CenteredEllipsoid>& bodies,
                                    std::int64_t trials, std::uint64_t seed,
                                    int threads) {
  check_bodies(bodies);
  if (trials < 1) throw std::invalid_argument("mixed_volume_mc: trials must be >= 1");
  const int m = static_cast<int>(bodies.size());

  std::vector<Eigen::MatrixXd> roots;
  roots.reserve(bodies.size());
  for (const auto& b : bodies) roots.push_back(b.sqrt_form());

  const McResult mc = run_trials(trials, threads, [&](std::int64_t trial) {
    RngStream rng(seed, static_cast<std::uint64_t>(trial));
    Eigen::MatrixXd columns(m, m);
    for (int i = 0; i < m; ++i)
      columns.col(i) = roots[static_cast<std::size_t>(i)] * rng.gaussian_vector(m);
    return TrialOutcome{std::abs(columns.determinant()), 0};
  });

  const double norm = unit_ball_volume(m) / expected_abs_gaussian_det(m);
  MixedVolumeEstimate est;
  est.value = norm * mc.mean;
  est.std_error = norm * mc.std_error;
  est.samples = trials;
  est.method = MixedVolumeMethod::gaussian_mc;
  return est;
}

std::vector<Eigen::VectorXd> oracle_directions(int m, int count) {
  std::vector<Eigen::VectorXd> dirs;
  if (m == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
  } else if (m == 2) {
    dirs.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double phi = 2.0 * 3.14159265358979323846 * (k + 0.5) / count;
      Eigen::VectorXd u(2);
      u << std::cos(phi), std::sin(phi);
      dirs.push_back(u);
    }
  } else if (m == 3) {
    // Fibonacci sphere.
    dirs.reserve(static_cast<std::size_t>(count));
    const double golden = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      Eigen::VectorXd u(3);
      u << r * std::cos(phi), r * std::sin(phi), z;
      dirs.push_back(u);
    }
  } else {
    throw std::invalid_argument("oracle_directions: only m in {1, 2, 3}");
  }
  return dirs;
}

double minkowski_sum_volume(const MinkowskiSum& body,
                            const std::vector<Eigen::VectorXd>& directions) {
  const int m = body.dim();
  if (m == 1) {
    std::vector<double> pts;
    pts.reserve(directions.size());
    for (const auto& u : directions) pts.push_back(body.boundary_point(u)[0]);
    return hull_length_1d(pts);
  }
  if (m == 2) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(directions.size());
    for (const auto& u : directions) pts.push_back(body.boundary_point(u));
    return hull_area_2d(pts);
  }
  if (m == 3) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(directions.size());
    for (const auto& u : directions) pts.push_back(body.boundary_point(u));
    return hull_volume_3d(pts);
  }
  throw std::invalid_argument("minkowski_sum_volume: only dimensions 1, 2, 3");
}

MixedVolumeEstimate mixed_volume_oracle(const std::vector<CenteredEllipsoid>& bodies,
                                        int directions) {
  check_bodies(bodies);
  const int m = static_cast<int>(bodies.size());
  if (m > 3)
    throw std::invalid_argument("mixed_volume_oracle: only m <= 3 supported");
  if (directions < 20 * m)
    throw std::invalid_argument("mixed_volume_oracle: need at least 20*m directions");

  const std::vector<Eigen::VectorXd> dirs = oracle_directions(m, directions);

  // Polarization over the 2^m - 1 nonempty subsets.
  double acc = 0.0;
  for (unsigned subset = 1; subset < (1u << m); ++subset) {
    std::vector<CenteredEllipsoid> terms;
    for (int i = 0; i < m; ++i)
      if (subset & (1u << i)) terms.push_back(bodies[static_cast<std::size_t>(i)]);
    const int sign = ((m - static_cast<int>(terms.size())) % 2 == 0) ? 1 : -1;
    acc += sign * minkowski_sum_volume(MinkowskiSum(std::move(terms)), dirs);
  }
  double factorial = 1.0;
  for (int i = 2; i <= m; ++i) factorial *= i;

  MixedVolumeEstimate est;
  est.value = std::max(acc / factorial, 0.0);
  est.std_error = 0.0;
  est.samples = directions;
  est.method = MixedVolumeMethod::polarization_oracle;
  return est;
}

}  // namespace intgeo
