#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "intgeo/rng.hpp"
#include "intgeo/roots.hpp"

namespace intgeo {

// c_d = Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2)): the mean of |<u, e>| over
// uniform unit vectors u. Normalizes hyperplane sampling so that the
// weighted measure of hyperplanes meeting a unit segment is 1.
double hyperplane_density_constant(int d);

struct HyperplaneSample {
  Eigen::VectorXd u;    // unit normal
  double a = 0.0;       // offset: the hyperplane is <u, x> = a
  double weight = 0.0;  // 2R / c_d
};

// u uniform on the sphere, a uniform on [-R, R].
HyperplaneSample sample_hyperplane(int d, double range, RngStream& rng);

// Piecewise-smooth curve t in [0, 1] -> R^d, optionally closed and
// optionally constrained to the unit sphere (ambient 3).
struct CurveModel {
  std::string name;
  int ambient = 0;
  bool closed = false;
  bool on_sphere = false;
  std::function<Eigen::VectorXd(double)> point;
  std::function<Eigen::VectorXd(double)> velocity;
};

CurveModel segment_curve(const Eigen::VectorXd& from, const Eigen::VectorXd& to);
CurveModel circle_curve(int ambient, double radius);
CurveModel great_circle();
CurveModel small_circle(double colatitude);

// Closed trigonometric curve: coordinate j is
//   constant[j] + sum_k cos_coeff(j,k) cos(2 pi (k+1) t)
//               + sum_k sin_coeff(j,k) sin(2 pi (k+1) t).
struct TrigCoeffs {
  Eigen::VectorXd constant;
  Eigen::MatrixXd cos_coeff;
  Eigen::MatrixXd sin_coeff;
};
CurveModel trig_curve(const TrigCoeffs& coeffs);

// Trigonometric curve radially normalized onto the unit sphere (the raw
// curve must stay away from the origin).
CurveModel sphere_trig_curve(const TrigCoeffs& coeffs);

// Same curve pushed through a fixed orthogonal map.
CurveModel rotated_curve(const CurveModel& curve, const Eigen::MatrixXd& rotation);

// Arclength by direct quadrature of |velocity| (oracle for the estimators).
double curve_length_quadrature(const CurveModel& curve, int nodes);

// Gridded sup of |point(t)| (used to validate offset ranges).
double curve_sup_norm(const CurveModel& curve, int nodes);

// Worst relative mismatch between velocity and finite differences of point.
double max_velocity_mismatch(const CurveModel& curve, int samples,
                             std::uint64_t seed);

struct CroftonOptions {
  int resolution = 2048;  // 1-D root scan cells along the curve parameter
  int threads = 1;
  int max_redraws = 64;   // cap on per-trial non-transversal redraws
  RootOptions roots;
};

struct CroftonEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t redraws = 0;
};

// Weighted mean over random hyperplanes of #(curve intersection points),
// estimating the arclength (invariant-measure Crofton formula).
CroftonEstimate euclid_crofton_length(const CurveModel& curve,
                                      std::int64_t trials, double range,
                                      std::uint64_t seed,
                                      const CroftonOptions& opts = {});

// pi times the mean over uniform poles of #(curve intersection points with
// the pole's great circle), estimating arclength on the sphere.
CroftonEstimate sphere_crofton_length(const CurveModel& curve,
                                      std::int64_t trials, std::uint64_t seed,
                                      const CroftonOptions& opts = {});

struct ProductCroftonReport {
  CroftonEstimate mc;             // mean of #(C1 cap Y_g1) * #(C2 cap Y_g2)
  double density_integral = 0.0;  // (1/pi^2) integral of vol_{1,1} vol_{1,2}
  double relative_gap = 0.0;
};

// Cross-checks the product formula on M = C1 x C2 in S^2 x S^2: the Monte
// Carlo product count against the density integral evaluated through
// product_d1 on tangent frames of the product embedding.
ProductCroftonReport product_crofton_check(const CurveModel& c1,
                                           const CurveModel& c2,
                                           std::int64_t trials,
                                           std::uint64_t seed,
                                           const CroftonOptions& opts = {},
                                           int quadrature_nodes = 128);

}  // namespace intgeo
