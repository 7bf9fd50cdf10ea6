#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace intgeo {

struct QuadratureRule1D {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// Uniform rule on one period of a periodic axis: nodes k*period/n for
/// k = 0..n-1, constant weight period/n. Spectrally accurate for smooth
/// periodic integrands.
QuadratureRule1D trapezoid_periodic(int n, double period);

/// Gauss-Legendre rule on [lo, hi] (Golub-Welsch nodes).
QuadratureRule1D gauss_legendre(int n, double lo, double hi);

/// Visits every tensor-product node (last axis fastest) with its weight.
void tensor_for_each(const std::vector<QuadratureRule1D>& axes,
                     const std::function<void(const Eigen::VectorXd&, double)>& fn);

/// Tensor-product integral of f over the given per-axis rules.
/// Summation is compensated (Kahan) in a fixed traversal order.
double integrate_tensor(const std::vector<QuadratureRule1D>& axes,
                        const std::function<double(const Eigen::VectorXd&)>& f);

}  // namespace intgeo
