#pragma once

#include <vector>

#include <Eigen/Core>

namespace intgeo {

/// Relative tolerance for accepting a nearly-symmetric form matrix.
inline constexpr double kSymTol = 1e-10;
/// Relative tolerance (w.r.t. the largest eigenvalue) below which negative
/// eigenvalues are treated as rounding noise and clamped to zero.
inline constexpr double kPsdTol = 1e-9;
/// Relative singular-value ratio below which a frame counts as degenerate.
inline constexpr double kRankTol = 1e-8;

/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

class Frame;

/// A centered symmetric convex body represented by a PSD quadratic form Q:
/// the body is { J^T u : |u| <= 1 } for any J with J^T J = Q, and its support
/// function is h(xi) = sqrt(xi^T Q xi). Rank may be anything from 0 (a point)
/// to dim (a full-dimensional ellipsoid); segments are rank-1 forms.
class CenteredEllipsoid {
 public:
  /// Validates symmetry and near-PSD-ness; clamps tiny negative eigenvalues.
  explicit CenteredEllipsoid(Eigen::MatrixXd form);

  static CenteredEllipsoid unit_ball(int dim);
  static CenteredEllipsoid point(int dim);
  /// Segment [-v, v]; its form is v v^T.
  static CenteredEllipsoid segment(const Eigen::VectorXd& half_axis);

  int dim() const { return static_cast<int>(form_.rows()); }
  const Eigen::MatrixXd& form() const { return form_; }

  /// h(xi) = sqrt(max(xi^T Q xi, 0)).
  double support(const Eigen::VectorXd& xi) const;

  /// The symmetric PSD square root Q^{1/2} (eigendecomposition, clamped).
  Eigen::MatrixXd sqrt_form() const;

  /// vol_dim = kappa_dim * sqrt(det Q).
  double volume() const;

  /// Restriction to the span of the frame, in frame coordinates:
  /// the m-dimensional ellipsoid with form B^T Q B.
  CenteredEllipsoid project(const Frame& frame) const;

 private:
  Eigen::MatrixXd form_;
};

/// An ordered list of m tangent vectors in R^ambient_dim, 1 <= m <= ambient.
/// Linear dependence is permitted; dependent frames make densities vanish.
class Frame {
 public:
  /// Columns of `vectors` are the frame vectors.
  explicit Frame(Eigen::MatrixXd vectors);
  Frame(int ambient_dim, const std::vector<Eigen::VectorXd>& vectors);

  static Frame standard(int ambient_dim, int m);

  int ambient_dim() const { return static_cast<int>(matrix_.rows()); }
  int size() const { return static_cast<int>(matrix_.cols()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// sigma_min / sigma_max of the frame matrix (0 for a zero frame).
  double singular_value_ratio() const;
  bool degenerate(double tol = kRankTol) const;

 private:
  Eigen::MatrixXd matrix_;
};

/// Support-function evaluator of a Minkowski sum of centered ellipsoids.
/// The sum of ellipsoids is generally not an ellipsoid, so the sum is kept
/// as the sum of support functions.
class MinkowskiSum {
 public:
  explicit MinkowskiSum(std::vector<CenteredEllipsoid> terms);

  int dim() const;
  double support(const Eigen::VectorXd& xi) const;

  /// Boundary point with outer normal u: the gradient of the support
  /// function, sum_i Q_i u / sqrt(u^T Q_i u). Terms with u^T Q_i u at
  /// rounding level contribute nothing in that direction.
  Eigen::VectorXd boundary_point(const Eigen::VectorXd& u) const;

  const std::vector<CenteredEllipsoid>& terms() const { return terms_; }

 private:
  std::vector<CenteredEllipsoid> terms_;
};

/// Minkowski sum of two bodies as a support evaluator.
MinkowskiSum sum(const CenteredEllipsoid& a, const CenteredEllipsoid& b);

}  // namespace intgeo
