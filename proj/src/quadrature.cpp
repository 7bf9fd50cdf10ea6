#include "intgeo/quadrature.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace intgeo {

QuadratureRule1D trapezoid_periodic(int n, double period) {
  if (n < 1) throw std::invalid_argument("trapezoid_periodic: n must be >= 1");
  if (period <= 0.0) throw std::invalid_argument("trapezoid_periodic: period must be > 0");
  QuadratureRule1D rule;
  rule.nodes.resize(n);
  rule.weights = Eigen::VectorXd::Constant(n, period / n);
  for (int k = 0; k < n; ++k) rule.nodes[k] = period * k / n;
  return rule;
}

QuadratureRule1D gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  if (!(lo < hi)) throw std::invalid_argument("gauss_legendre: need lo < hi");

  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come
  // from the first components of the eigenvectors.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  const Eigen::VectorXd x = solver.eigenvalues();
  const Eigen::MatrixXd v = solver.eigenvectors();

  QuadratureRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = mid + half * x[k];
    rule.weights[k] = 2.0 * v(0, k) * v(0, k) * half;
  }
  return rule;
}

void tensor_for_each(const std::vector<QuadratureRule1D>& axes,
                     const std::function<void(const Eigen::VectorXd&, double)>& fn) {
  if (axes.empty()) throw std::invalid_argument("tensor_for_each: no axes");
  const int dim = static_cast<int>(axes.size());

  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  Eigen::VectorXd x(dim);

  for (;;) {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      x[a] = axes[static_cast<std::size_t>(a)].nodes[idx[static_cast<std::size_t>(a)]];
      w *= axes[static_cast<std::size_t>(a)].weights[idx[static_cast<std::size_t>(a)]];
    }
    fn(x, w);

    int axis = dim - 1;
    for (; axis >= 0; --axis) {
      auto& i = idx[static_cast<std::size_t>(axis)];
      if (++i < axes[static_cast<std::size_t>(axis)].nodes.size()) break;
      i = 0;
    }
    if (axis < 0) break;
  }
}

double integrate_tensor(const std::vector<QuadratureRule1D>& axes,
                        const std::function<double(const Eigen::VectorXd&)>& f) {
  double sum = 0.0, comp = 0.0;  // Kahan
  tensor_for_each(axes, [&](const Eigen::VectorXd& x, double w) {
    const double term = w * f(x) - comp;
    const double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  });
  return sum;
}

}  // namespace intgeo
