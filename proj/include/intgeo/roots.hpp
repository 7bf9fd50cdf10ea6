#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "intgeo/finsler.hpp"

namespace intgeo {

struct RootOptions {
  double dedup_tol = 1e-7;     // minimum separation in the domain metric
  double sing_tol = 1e-8;      // Jacobian singular value below this flags the root
  double residual_tol = 1e-9;  // every reported root satisfies |f_i| <= this
  double newton_tol = 1e-12;   // parameter-space convergence tolerance
};

struct Equation {
  std::function<double(const Eigen::VectorXd&)> value;  // f(x) - a
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
};

struct ScalarSystem {
  ChartDomain domain;
  std::vector<Equation> equations;  // one per domain dimension
};

struct RootSet {
  std::vector<Eigen::VectorXd> points;  // sorted lexicographically
  std::vector<double> condition;        // smallest Jacobian singular value
  bool non_transversal = false;         // some root has condition < sing_tol
  int inconclusive_cells = 0;           // cells still unresolved after one split

  int count() const { return static_cast<int>(points.size()); }
};

// Counts and locates the zeros of an n-equation system on an n-dim chart,
// n in {1, 2}. 1-D: sign scan over `resolution` cells, bisection, Newton
// polish, plus a tangency pass that splits cells at interior critical
// points. 2-D: per-cell interval exclusion with a Lipschitz margin, Newton
// from cell centers, one subdivision for unresolved cells.
RootSet count_roots(const ScalarSystem& sys, int resolution,
                    const RootOptions& opts = {});

// Grid cores. The Monte Carlo estimators assemble node values in bulk
// (one matrix-vector product per trial) and call these directly; the
// callables are only consulted near roots.

struct LineScanResult {
  std::vector<double> roots;      // sorted parameter values
  std::vector<double> condition;  // |f'| at each root
  bool non_transversal = false;

  int count() const { return static_cast<int>(roots.size()); }
};

// Zeros of a scalar function on [origin, origin + length]. `values` and
// `derivs` sample f and f' at the uniform nodes origin + k*length/resolution,
// k = 0..resolution; periodic inputs duplicate the first node at the end.
LineScanResult count_zeros_line(double origin, double length, bool periodic,
                                const Eigen::VectorXd& values,
                                const Eigen::VectorXd& derivs,
                                const std::function<double(double)>& f,
                                const std::function<double(double)>& df,
                                const RootOptions& opts = {});

// Writes F(x) and the Jacobian J(x) of a two-equation system.
using System2D = std::function<void(const Eigen::Vector2d&, Eigen::Vector2d&,
                                    Eigen::Matrix2d&)>;

struct CellScanResult {
  std::vector<Eigen::Vector2d> roots;  // sorted lexicographically
  std::vector<double> condition;
  bool non_transversal = false;
  int inconclusive_cells = 0;

  int count() const { return static_cast<int>(roots.size()); }
};

// Zeros of a 2-D system on a 2-D chart. `values[e](i, j)` samples equation e
// at node (lower_x + i*hx, lower_y + j*hy) on the (nx+1) x (ny+1) grid
// (torus grids duplicate the wrapped far edges); `lip[e]` bounds
// sup |grad f_e| over the chart.
CellScanResult count_zeros_cells(const ChartDomain& domain, int nx, int ny,
                                 const std::array<Eigen::MatrixXd, 2>& values,
                                 const std::array<double, 2>& lip,
                                 const System2D& system,
                                 const RootOptions& opts = {});

}  // namespace intgeo
