#include "intgeo/finsler.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include <Eigen/Cholesky>

#include "intgeo/rng.hpp"

namespace intgeo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

ChartDomain::ChartDomain(DomainKind kind, std::vector<double> origin,
                         std::vector<double> lengths)
    : kind_(kind), origin_(std::move(origin)), lengths_(std::move(lengths)) {}

ChartDomain ChartDomain::torus(int dim, std::vector<double> periods) {
  if (dim < 1) throw std::invalid_argument("ChartDomain: dim must be >= 1");
  if (periods.empty()) periods.assign(static_cast<std::size_t>(dim), kTwoPi);
  if (static_cast<int>(periods.size()) != dim)
    throw std::invalid_argument("ChartDomain: periods length must match dim");
  for (double p : periods)
    if (!(p > 0.0)) throw std::invalid_argument("ChartDomain: periods must be > 0");
  return ChartDomain(DomainKind::torus,
                     std::vector<double>(static_cast<std::size_t>(dim), 0.0),
                     std::move(periods));
}

ChartDomain ChartDomain::box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.empty() || lower.size() != upper.size())
    throw std::invalid_argument("ChartDomain: box bounds must be nonempty and equal length");
  std::vector<double> lengths(lower.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i]))
      throw std::invalid_argument("ChartDomain: box needs lower < upper per axis");
    lengths[i] = upper[i] - lower[i];
  }
  return ChartDomain(DomainKind::box, std::move(lower), std::move(lengths));
}

void ChartDomain::check_axis(int axis) const {
  if (axis < 0 || axis >= dim())
    throw std::invalid_argument("ChartDomain: axis out of range");
}

double ChartDomain::period(int axis) const {
  check_axis(axis);
  if (kind_ != DomainKind::torus)
    throw std::invalid_argument("ChartDomain: period is a torus property");
  return lengths_[static_cast<std::size_t>(axis)];
}

double ChartDomain::lower(int axis) const {
  check_axis(axis);
  return origin_[static_cast<std::size_t>(axis)];
}

double ChartDomain::upper(int axis) const {
  check_axis(axis);
  return origin_[static_cast<std::size_t>(axis)] +
         lengths_[static_cast<std::size_t>(axis)];
}

double ChartDomain::axis_length(int axis) const {
  check_axis(axis);
  return lengths_[static_cast<std::size_t>(axis)];
}

Eigen::VectorXd ChartDomain::reduce(const Eigen::VectorXd& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("ChartDomain: point dimension mismatch");
  Eigen::VectorXd out = x;
  for (int a = 0; a < dim(); ++a) {
    const double len = lengths_[static_cast<std::size_t>(a)];
    if (kind_ == DomainKind::torus) {
      double r = std::fmod(out[a], len);
      if (r < 0.0) r += len;
      out[a] = r;
    } else {
      const double lo = origin_[static_cast<std::size_t>(a)];
      if (out[a] < lo || out[a] > lo + len)
        throw std::invalid_argument("ChartDomain: point outside box bounds");
    }
  }
  return out;
}

bool ChartDomain::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) return false;
  if (kind_ == DomainKind::torus) return true;
  for (int a = 0; a < dim(); ++a) {
    const double lo = origin_[static_cast<std::size_t>(a)];
    if (x[a] < lo || x[a] > lo + lengths_[static_cast<std::size_t>(a)]) return false;
  }
  return true;
}

double ChartDomain::distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != dim() || b.size() != dim())
    throw std::invalid_argument("ChartDomain: point dimension mismatch");
  double acc = 0.0;
  for (int i = 0; i < dim(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (kind_ == DomainKind::torus) {
      const double len = lengths_[static_cast<std::size_t>(i)];
      d = std::fmod(d, len);
      d = std::min(d, len - d);
    }
    acc += d * d;
  }
  return std::sqrt(acc);
}

QuadratureRule1D ChartDomain::axis_rule(int axis, int nodes) const {
  check_axis(axis);
  if (kind_ == DomainKind::torus)
    return trapezoid_periodic(nodes, lengths_[static_cast<std::size_t>(axis)]);
  return gauss_legendre(nodes, lower(axis), upper(axis));
}

std::vector<QuadratureRule1D> ChartDomain::rules(const std::vector<int>& nodes_per_axis) const {
  if (static_cast<int>(nodes_per_axis.size()) != dim())
    throw std::invalid_argument("ChartDomain: need one node count per axis");
  std::vector<QuadratureRule1D> axes;
  axes.reserve(nodes_per_axis.size());
  for (int a = 0; a < dim(); ++a) {
    if (nodes_per_axis[static_cast<std::size_t>(a)] < 4)
      throw std::invalid_argument("ChartDomain: need at least 4 nodes per axis");
    axes.push_back(axis_rule(a, nodes_per_axis[static_cast<std::size_t>(a)]));
  }
  return axes;
}

FunctionSpace::FunctionSpace(ChartDomain domain, std::vector<BasisFunction> basis)
    : domain_(std::move(domain)), basis_(std::move(basis)) {
  if (basis_.empty())
    throw std::invalid_argument("FunctionSpace: need at least one basis function");
  for (const auto& b : basis_)
    if (!b.value || !b.gradient)
      throw std::invalid_argument("FunctionSpace: basis handles must be callable");
}

Eigen::VectorXd FunctionSpace::theta(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd p = domain_.reduce(x);
  Eigen::VectorXd out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = basis_[static_cast<std::size_t>(i)].value(p);
  return out;
}

Eigen::MatrixXd FunctionSpace::gradient_matrix(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd p = domain_.reduce(x);
  Eigen::MatrixXd jac(dim(), domain_.dim());
  for (int i = 0; i < dim(); ++i) {
    const Eigen::VectorXd g = basis_[static_cast<std::size_t>(i)].gradient(p);
    if (g.size() != domain_.dim())
      throw std::invalid_argument("FunctionSpace: gradient dimension mismatch");
    jac.row(i) = g.transpose();
  }
  return jac;
}

CenteredEllipsoid FunctionSpace::finsler_ellipsoid(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd jac = gradient_matrix(x);
  return CenteredEllipsoid(jac.transpose() * jac);
}

FunctionSpace trig_space(const ChartDomain& domain, const std::vector<TrigMode>& modes) {
  if (domain.kind() != DomainKind::torus)
    throw std::invalid_argument("trig_space: domain must be a torus");
  if (modes.empty()) throw std::invalid_argument("trig_space: need at least one mode");

  const int n = domain.dim();
  std::vector<BasisFunction> basis;
  basis.reserve(modes.size());
  for (const auto& mode : modes) {
    if (mode.wave.size() != n)
      throw std::invalid_argument("trig_space: wave vector dimension mismatch");
    Eigen::VectorXd omega(n);
    for (int a = 0; a < n; ++a) omega[a] = mode.wave[a] * kTwoPi / domain.period(a);

    std::string name = mode.sine ? "sin[" : "cos[";
    for (int a = 0; a < n; ++a) {
      if (a) name += ',';
      name += std::to_string(mode.wave[a]);
    }
    name += ']';

    const bool sine = mode.sine;
    BasisFunction f;
    f.name = std::move(name);
    f.value = [omega, sine](const Eigen::VectorXd& x) {
      const double phase = omega.dot(x);
      return sine ? std::sin(phase) : std::cos(phase);
    };
    f.gradient = [omega, sine](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const double phase = omega.dot(x);
      return (sine ? std::cos(phase) : -std::sin(phase)) * omega;
    };
    basis.push_back(std::move(f));
  }
  return FunctionSpace(domain, std::move(basis));
}

FunctionSpace poly_space(const ChartDomain& domain,
                         const std::vector<Eigen::VectorXi>& exponents) {
  if (domain.kind() != DomainKind::box)
    throw std::invalid_argument("poly_space: domain must be a box");
  if (exponents.empty()) throw std::invalid_argument("poly_space: need at least one monomial");

  const int n = domain.dim();
  std::vector<BasisFunction> basis;
  basis.reserve(exponents.size());
  for (const auto& e : exponents) {
    if (e.size() != n)
      throw std::invalid_argument("poly_space: exponent vector dimension mismatch");
    if (e.minCoeff() < 0)
      throw std::invalid_argument("poly_space: exponents must be >= 0");

    std::string name = "x^[";
    for (int a = 0; a < n; ++a) {
      if (a) name += ',';
      name += std::to_string(e[a]);
    }
    name += ']';

    const Eigen::VectorXi exp = e;
    BasisFunction f;
    f.name = std::move(name);
    f.value = [exp](const Eigen::VectorXd& x) {
      double v = 1.0;
      for (int a = 0; a < exp.size(); ++a)
        for (int k = 0; k < exp[a]; ++k) v *= x[a];
      return v;
    };
    f.gradient = [exp](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(exp.size());
      for (int a = 0; a < exp.size(); ++a) {
        if (exp[a] == 0) continue;
        double v = exp[a];
        for (int b = 0; b < exp.size(); ++b) {
          const int p = (b == a) ? exp[b] - 1 : exp[b];
          for (int k = 0; k < p; ++k) v *= x[b];
        }
        g[a] = v;
      }
      return g;
    };
    basis.push_back(std::move(f));
  }
  return FunctionSpace(domain, std::move(basis));
}

FunctionSpace constant_space(const ChartDomain& domain, double value) {
  const int n = domain.dim();
  BasisFunction f;
  f.name = "const";
  f.value = [value](const Eigen::VectorXd&) { return value; };
  f.gradient = [n](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n); };
  return FunctionSpace(domain, {std::move(f)});
}

FunctionSpace orthonormalize(const FunctionSpace& space,
                             const std::vector<int>& nodes_per_axis) {
  const auto axes = space.domain().rules(nodes_per_axis);
  const int d = space.dim();

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> weights;
  tensor_for_each(axes, [&](const Eigen::VectorXd& x, double w) {
    rows.push_back(space.theta(x));
    weights.push_back(w);
  });

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t g = 0; g < rows.size(); ++g)
    gram += weights[g] * (rows[g] * rows[g].transpose());
  gram = 0.5 * (gram + gram.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("orthonormalize: basis is linearly dependent on the grid");
  // New basis = L^{-1} (old basis), so the grid Gram matrix becomes I.
  const Eigen::MatrixXd combo = Eigen::MatrixXd(llt.matrixL())
                                    .triangularView<Eigen::Lower>()
                                    .solve(Eigen::MatrixXd::Identity(d, d));

  auto old = std::make_shared<std::vector<BasisFunction>>(space.basis());
  std::vector<BasisFunction> basis;
  basis.reserve(static_cast<std::size_t>(d));
  const int n = space.domain().dim();
  for (int j = 0; j < d; ++j) {
    const Eigen::RowVectorXd row = combo.row(j);
    BasisFunction f;
    f.name = "gs" + std::to_string(j);
    f.value = [old, row](const Eigen::VectorXd& x) {
      double v = 0.0;
      for (int k = 0; k < row.size(); ++k)
        if (row[k] != 0.0) v += row[k] * (*old)[static_cast<std::size_t>(k)].value(x);
      return v;
    };
    f.gradient = [old, row, n](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < row.size(); ++k)
        if (row[k] != 0.0) g += row[k] * (*old)[static_cast<std::size_t>(k)].gradient(x);
      return g;
    };
    basis.push_back(std::move(f));
  }
  return FunctionSpace(space.domain(), std::move(basis));
}

double max_gradient_mismatch(const FunctionSpace& space, int samples,
                             std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("max_gradient_mismatch: samples >= 1");
  const ChartDomain& dom = space.domain();
  const int n = dom.dim();
  const double h = 1e-6;

  RngStream rng(seed, 0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd x(n);
    for (int a = 0; a < n; ++a) {
      // Keep a margin so central differences stay inside box domains.
      const double lo = dom.lower(a) + 2.0 * h * dom.axis_length(a);
      const double hi = dom.upper(a) - 2.0 * h * dom.axis_length(a);
      x[a] = rng.uniform(lo, hi);
    }
    for (const auto& b : space.basis()) {
      const Eigen::VectorXd g = b.gradient(x);
      for (int a = 0; a < n; ++a) {
        Eigen::VectorXd xp = x, xm = x;
        const double step = h * std::max(1.0, std::abs(x[a]));
        xp[a] += step;
        xm[a] -= step;
        const double fd = (b.value(xp) - b.value(xm)) / (2.0 * step);
        const double err = std::abs(fd - g[a]) / std::max(1.0, std::abs(g[a]));
        worst = std::max(worst, err);
      }
    }
  }
  return worst;
}

double sup_theta_norm(const FunctionSpace& space, int nodes_per_axis) {
  if (nodes_per_axis < 4) throw std::invalid_argument("sup_theta_norm: need >= 4 nodes");
  std::vector<int> nodes(static_cast<std::size_t>(space.domain().dim()), nodes_per_axis);
  const auto axes = space.domain().rules(nodes);
  double sup = 0.0;
  tensor_for_each(axes, [&](const Eigen::VectorXd& x, double) {
    sup = std::max(sup, space.theta(x).norm());
  });
  return sup;
}

double symplectic_volume(const FunctionSpace& space,
                         const std::vector<int>& nodes_per_axis) {
  const auto axes = space.domain().rules(nodes_per_axis);
  return integrate_tensor(axes, [&](const Eigen::VectorXd& x) {
    return space.finsler_ellipsoid(x).volume();
  });
}

double mixed_symplectic_volume(const std::vector<FunctionSpace>& spaces,
                               const std::vector<int>& nodes_per_axis,
                               const DensityOptions& opts) {
  if (spaces.empty())
    throw std::invalid_argument("mixed_symplectic_volume: need at least one space");
  const ChartDomain& dom = spaces.front().domain();
  const int n = dom.dim();
  if (static_cast<int>(spaces.size()) != n)
    throw std::invalid_argument("mixed_symplectic_volume: need n spaces on an n-dim chart");
  for (const auto& s : spaces) {
    const ChartDomain& d = s.domain();
    bool same = d.dim() == n && d.kind() == dom.kind();
    for (int axis = 0; same && axis < n; ++axis)
      same = d.lower(axis) == dom.lower(axis) && d.upper(axis) == dom.upper(axis);
    if (!same)
      throw std::invalid_argument("mixed_symplectic_volume: spaces must share the domain");
  }

  const Frame frame = Frame::standard(n, n);
  const auto axes = dom.rules(nodes_per_axis);
  return integrate_tensor(axes, [&](const Eigen::VectorXd& x) {
    std::vector<CenteredEllipsoid> bodies;
    bodies.reserve(spaces.size());
    for (const auto& s : spaces) bodies.push_back(s.finsler_ellipsoid(x));
    return mixed_density(bodies, frame, opts).value;
  });
}

}  // namespace intgeo
