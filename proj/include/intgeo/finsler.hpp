#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "intgeo/density.hpp"
#include "intgeo/ellipsoid.hpp"
#include "intgeo/quadrature.hpp"

namespace intgeo {

enum class DomainKind { torus, box };

// Flat chart: a torus with per-coordinate periods or an axis-aligned box.
class ChartDomain {
 public:
  static ChartDomain torus(int dim, std::vector<double> periods = {});
  static ChartDomain box(std::vector<double> lower, std::vector<double> upper);

  DomainKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(lengths_.size()); }

  double period(int axis) const;
  double lower(int axis) const;
  double upper(int axis) const;
  double axis_length(int axis) const;

  // Torus points are wrapped into [0, period); box points must lie inside.
  Eigen::VectorXd reduce(const Eigen::VectorXd& x) const;
  bool contains(const Eigen::VectorXd& x) const;

  // Metric distance; wraps around torus axes.
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  // Quadrature rule for one axis: periodic trapezoid on torus axes
  // (spectrally accurate for trigonometric integrands), Gauss-Legendre on
  // box axes.
  QuadratureRule1D axis_rule(int axis, int nodes) const;
  std::vector<QuadratureRule1D> rules(const std::vector<int>& nodes_per_axis) const;

 private:
  ChartDomain(DomainKind kind, std::vector<double> origin, std::vector<double> lengths);
  void check_axis(int axis) const;

  DomainKind kind_;
  std::vector<double> origin_;   // 0 for torus axes, lower bound for box axes
  std::vector<double> lengths_;  // period or upper - lower
};

struct BasisFunction {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

// Finite-dimensional space of smooth functions on a chart. The stored basis
// is declared orthonormal: theta coordinates in it are the inner-product
// coordinates, and the unit ball of the space is the Euclidean ball there.
class FunctionSpace {
 public:
  FunctionSpace(ChartDomain domain, std::vector<BasisFunction> basis);

  const ChartDomain& domain() const { return domain_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<BasisFunction>& basis() const { return basis_; }

  // Evaluation map theta(x) = (f_1(x), ..., f_d(x)).
  Eigen::VectorXd theta(const Eigen::VectorXd& x) const;

  // d x n matrix of basis gradients at x (rows are gradients).
  Eigen::MatrixXd gradient_matrix(const Eigen::VectorXd& x) const;

  // Finsler ellipsoid E(x) in the cotangent chart: Q(x) = J(x)^T J(x),
  // so the support function is h(xi) = |J(x) xi|.
  CenteredEllipsoid finsler_ellipsoid(const Eigen::VectorXd& x) const;

 private:
  ChartDomain domain_;
  std::vector<BasisFunction> basis_;
};

struct TrigMode {
  Eigen::VectorXi wave;  // integer wave vector
  bool sine = false;     // false: cos, true: sin
};

// Span of cos/sin(k . x) modes on a torus.
FunctionSpace trig_space(const ChartDomain& domain, const std::vector<TrigMode>& modes);

// Span of monomials x^e on a box.
FunctionSpace poly_space(const ChartDomain& domain,
                         const std::vector<Eigen::VectorXi>& exponents);

// One-dimensional space of the constant function.
FunctionSpace constant_space(const ChartDomain& domain, double value = 1.0);

// Gram-Schmidt over the tensor quadrature grid: returns a space spanning the
// same functions whose stored basis is orthonormal for the grid L2 product.
FunctionSpace orthonormalize(const FunctionSpace& space,
                             const std::vector<int>& nodes_per_axis);

// Worst relative mismatch between stored gradients and central finite
// differences of the values over seeded sample points.
double max_gradient_mismatch(const FunctionSpace& space, int samples,
                             std::uint64_t seed);

// Gridded sup of |theta(x)| (used to bound hyperplane offset ranges).
double sup_theta_norm(const FunctionSpace& space, int nodes_per_axis);

// Integral over the chart of vol_n(E(x)).
double symplectic_volume(const FunctionSpace& space,
                         const std::vector<int>& nodes_per_axis);

// Integral over the chart of the mixed density d_n(E_1(x), ..., E_n(x))
// on the standard frame.
double mixed_symplectic_volume(const std::vector<FunctionSpace>& spaces,
                               const std::vector<int>& nodes_per_axis,
                               const DensityOptions& opts = {});

}  // namespace intgeo
