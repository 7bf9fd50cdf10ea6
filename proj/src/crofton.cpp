#include "intgeo/crofton.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "intgeo/density.hpp"
#include "intgeo/parallel.hpp"
#include "intgeo/quadrature.hpp"

namespace intgeo {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

double hyperplane_density_constant(int d) {
  if (d < 1) throw std::invalid_argument("hyperplane_density_constant: d must be >= 1");
  return std::tgamma(0.5 * d) / (std::sqrt(kPi) * std::tgamma(0.5 * (d + 1)));
}

HyperplaneSample sample_hyperplane(int d, double range, RngStream& rng) {
  if (d < 1) throw std::invalid_argument("sample_hyperplane: d must be >= 1");
  if (!(range > 0.0)) throw std::invalid_argument("sample_hyperplane: range must be > 0");
  HyperplaneSample s;
  s.u = rng.unit_vector(d);
  s.a = rng.uniform(-range, range);
  s.weight = 2.0 * range / hyperplane_density_constant(d);
  return s;
}

CurveModel segment_curve(const Eigen::VectorXd& from, const Eigen::VectorXd& to) {
  if (from.size() != to.size() || from.size() < 1)
    throw std::invalid_argument("segment_curve: endpoint dimension mismatch");
  CurveModel c;
  c.name = "segment";
  c.ambient = static_cast<int>(from.size());
  c.closed = false;
  const Eigen::VectorXd delta = to - from;
  c.point = [from, delta](double t) -> Eigen::VectorXd { return from + t * delta; };
  c.velocity = [delta](double) -> Eigen::VectorXd { return delta; };
  return c;
}

CurveModel circle_curve(int ambient, double radius) {
  if (ambient < 2) throw std::invalid_argument("circle_curve: ambient must be >= 2");
  if (!(radius > 0.0)) throw std::invalid_argument("circle_curve: radius must be > 0");
  CurveModel c;
  c.name = "circle";
  c.ambient = ambient;
  c.closed = true;
  c.point = [ambient, radius](double t) -> Eigen::VectorXd {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(ambient);
    p[0] = radius * std::cos(kTwoPi * t);
    p[1] = radius * std::sin(kTwoPi * t);
    return p;
  };
  c.velocity = [ambient, radius](double t) -> Eigen::VectorXd {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient);
    v[0] = -radius * kTwoPi * std::sin(kTwoPi * t);
    v[1] = radius * kTwoPi * std::cos(kTwoPi * t);
    return v;
  };
  return c;
}

CurveModel great_circle() {
  CurveModel c = circle_curve(3, 1.0);
  c.name = "great_circle";
  c.on_sphere = true;
  return c;
}

CurveModel small_circle(double colatitude) {
  if (!(colatitude > 0.0) || !(colatitude < kPi))
    throw std::invalid_argument("small_circle: colatitude must be in (0, pi)");
  CurveModel c;
  c.name = "small_circle";
  c.ambient = 3;
  c.closed = true;
  c.on_sphere = true;
  const double r = std::sin(colatitude);
  const double z = std::cos(colatitude);
  c.point = [r, z](double t) -> Eigen::VectorXd {
    Eigen::Vector3d p(r * std::cos(kTwoPi * t), r * std::sin(kTwoPi * t), z);
    return p;
  };
  c.velocity = [r](double t) -> Eigen::VectorXd {
    Eigen::Vector3d v(-r * kTwoPi * std::sin(kTwoPi * t),
                      r * kTwoPi * std::cos(kTwoPi * t), 0.0);
    return v;
  };
  return c;
}

namespace {

void check_trig(const TrigCoeffs& coeffs) {
  const int d = static_cast<int>(coeffs.constant.size());
  if (d < 1) throw std::invalid_argument("trig_curve: need at least one coordinate");
  if (coeffs.cos_coeff.rows() != d || coeffs.sin_coeff.rows() != d ||
      coeffs.cos_coeff.cols() != coeffs.sin_coeff.cols())
    throw std::invalid_argument("trig_curve: coefficient shape mismatch");
}

Eigen::VectorXd trig_point(const TrigCoeffs& c, double t) {
  Eigen::VectorXd p = c.constant;
  for (int k = 0; k < c.cos_coeff.cols(); ++k) {
    const double phase = kTwoPi * (k + 1) * t;
    p += std::cos(phase) * c.cos_coeff.col(k) + std::sin(phase) * c.sin_coeff.col(k);
  }
  return p;
}

Eigen::VectorXd trig_velocity(const TrigCoeffs& c, double t) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(c.constant.size());
  for (int k = 0; k < c.cos_coeff.cols(); ++k) {
    const double omega = kTwoPi * (k + 1);
    const double phase = omega * t;
    v += -omega * std::sin(phase) * c.cos_coeff.col(k) +
         omega * std::cos(phase) * c.sin_coeff.col(k);
  }
  return v;
}

}  // namespace

CurveModel trig_curve(const TrigCoeffs& coeffs) {
  check_trig(coeffs);
  CurveModel c;
  c.name = "trig";
  c.ambient = static_cast<int>(coeffs.constant.size());
  c.closed = true;
  c.point = [coeffs](double t) { return trig_point(coeffs, t); };
  c.velocity = [coeffs](double t) { return trig_velocity(coeffs, t); };
  return c;
}

CurveModel sphere_trig_curve(const TrigCoeffs& coeffs) {
  check_trig(coeffs);
  if (coeffs.constant.size() != 3)
    throw std::invalid_argument("sphere_trig_curve: ambient must be 3");
  for (int k = 0; k <= 512; ++k) {
    if (trig_point(coeffs, k / 512.0).norm() < 1e-6)
      throw std::invalid_argument("sphere_trig_curve: raw curve passes near the origin");
  }
  CurveModel c;
  c.name = "sphere_trig";
  c.ambient = 3;
  c.closed = true;
  c.on_sphere = true;
  c.point = [coeffs](double t) -> Eigen::VectorXd {
    const Eigen::VectorXd u = trig_point(coeffs, t);
    return u / u.norm();
  };
  c.velocity = [coeffs](double t) -> Eigen::VectorXd {
    const Eigen::VectorXd u = trig_point(coeffs, t);
    const Eigen::VectorXd du = trig_velocity(coeffs, t);
    const double n = u.norm();
    return du / n - u * (u.dot(du)) / (n * n * n);
  };
  return c;
}

CurveModel rotated_curve(const CurveModel& curve, const Eigen::MatrixXd& rotation) {
  if (rotation.rows() != curve.ambient || rotation.cols() != curve.ambient)
    throw std::invalid_argument("rotated_curve: rotation shape mismatch");
  const Eigen::MatrixXd defect =
      rotation.transpose() * rotation -
      Eigen::MatrixXd::Identity(curve.ambient, curve.ambient);
  if (defect.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("rotated_curve: matrix is not orthogonal");
  CurveModel c = curve;
  c.name = curve.name + "+rot";
  const auto point = curve.point;
  const auto velocity = curve.velocity;
  const Eigen::MatrixXd rot = rotation;
  c.point = [rot, point](double t) -> Eigen::VectorXd { return rot * point(t); };
  c.velocity = [rot, velocity](double t) -> Eigen::VectorXd { return rot * velocity(t); };
  return c;
}

double curve_length_quadrature(const CurveModel& curve, int nodes) {
  if (nodes < 16) throw std::invalid_argument("curve_length_quadrature: need >= 16 nodes");
  const QuadratureRule1D rule =
      curve.closed ? trapezoid_periodic(nodes, 1.0) : gauss_legendre(nodes, 0.0, 1.0);
  double acc = 0.0;
  for (int k = 0; k < rule.nodes.size(); ++k)
    acc += rule.weights[k] * curve.velocity(rule.nodes[k]).norm();
  return acc;
}

double curve_sup_norm(const CurveModel& curve, int nodes) {
  if (nodes < 16) throw std::invalid_argument("curve_sup_norm: need >= 16 nodes");
  double sup = 0.0;
  for (int k = 0; k <= nodes; ++k)
    sup = std::max(sup, curve.point(static_cast<double>(k) / nodes).norm());
  return sup;
}

double max_velocity_mismatch(const CurveModel& curve, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("max_velocity_mismatch: samples >= 1");
  const double h = 1e-6;
  RngStream rng(seed, 0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double t = rng.uniform(2.0 * h, 1.0 - 2.0 * h);
    const Eigen::VectorXd fd = (curve.point(t + h) - curve.point(t - h)) / (2.0 * h);
    const Eigen::VectorXd v = curve.velocity(t);
    worst = std::max(worst, (fd - v).norm() / std::max(1.0, v.norm()));
  }
  return worst;
}

namespace {

struct CurveGrid {
  Eigen::MatrixXd points;      // ambient x (resolution + 1)
  Eigen::MatrixXd velocities;  // ambient x (resolution + 1)
};

CurveGrid sample_curve(const CurveModel& curve, int res) {
  if (!curve.point || !curve.velocity)
    throw std::invalid_argument("crofton: curve handles must be callable");
  if (res < 64) throw std::invalid_argument("crofton: resolution must be >= 64");
  CurveGrid g;
  g.points.resize(curve.ambient, res + 1);
  g.velocities.resize(curve.ambient, res + 1);
  for (int k = 0; k <= res; ++k) {
    const double t = static_cast<double>(k) / res;
    g.points.col(k) = curve.point(t);
    g.velocities.col(k) = curve.velocity(t);
  }
  return g;
}

// Intersections of the curve with the level set <u, x> = a; nullopt marks a
// non-transversal draw that the caller must reject.
std::optional<int> count_level_crossings(const CurveModel& curve,
                                         const CurveGrid& grid,
                                         const Eigen::VectorXd& u, double a,
                                         const CroftonOptions& opts) {
  Eigen::VectorXd vals = grid.points.transpose() * u;
  vals.array() -= a;
  const Eigen::VectorXd ders = grid.velocities.transpose() * u;
  auto f = [&](double t) { return u.dot(curve.point(t)) - a; };
  auto df = [&](double t) { return u.dot(curve.velocity(t)); };
  const LineScanResult scan =
      count_zeros_line(0.0, 1.0, curve.closed, vals, ders, f, df, opts.roots);
  if (scan.non_transversal) return std::nullopt;
  return scan.count();
}

}  // namespace

CroftonEstimate euclid_crofton_length(const CurveModel& curve, std::int64_t trials,
                                      double range, std::uint64_t seed,
                                      const CroftonOptions& opts) {
  if (trials < 1000)
    throw std::invalid_argument("euclid_crofton_length: trials must be >= 1000");
  const double sup = curve_sup_norm(curve, 512);
  if (!(range >= sup))
    throw std::invalid_argument(
        "euclid_crofton_length: range must cover the curve (use sup|curve| * 1.01)");

  const CurveGrid grid = sample_curve(curve, opts.resolution);
  const double weight = 2.0 * range / hyperplane_density_constant(curve.ambient);

  const McResult mc = run_trials(trials, opts.threads, [&](std::int64_t trial) {
    for (int attempt = 0; attempt < opts.max_redraws; ++attempt) {
      RngStream rng(seed, static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(attempt));
      const HyperplaneSample hp = sample_hyperplane(curve.ambient, range, rng);
      const auto n = count_level_crossings(curve, grid, hp.u, hp.a, opts);
      if (n) return TrialOutcome{weight * *n, attempt};
    }
    throw std::runtime_error("euclid_crofton_length: persistent non-transversal draws");
  });

  return CroftonEstimate{mc.mean, mc.std_error, mc.trials, mc.redraws};
}

CroftonEstimate sphere_crofton_length(const CurveModel& curve, std::int64_t trials,
                                      std::uint64_t seed, const CroftonOptions& opts) {
  if (trials < 1000)
    throw std::invalid_argument("sphere_crofton_length: trials must be >= 1000");
  if (!curve.on_sphere || curve.ambient != 3)
    throw std::invalid_argument("sphere_crofton_length: curve must lie on S^2");

  const CurveGrid grid = sample_curve(curve, opts.resolution);

  const McResult mc = run_trials(trials, opts.threads, [&](std::int64_t trial) {
    for (int attempt = 0; attempt < opts.max_redraws; ++attempt) {
      RngStream rng(seed, static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(attempt));
      const Eigen::VectorXd pole = rng.unit_vector(3);
      const auto n = count_level_crossings(curve, grid, pole, 0.0, opts);
      if (n) return TrialOutcome{kPi * *n, attempt};
    }
    throw std::runtime_error("sphere_crofton_length: persistent non-transversal draws");
  });

  return CroftonEstimate{mc.mean, mc.std_error, mc.trials, mc.redraws};
}

ProductCroftonReport product_crofton_check(const CurveModel& c1, const CurveModel& c2,
                                           std::int64_t trials, std::uint64_t seed,
                                           const CroftonOptions& opts,
                                           int quadrature_nodes) {
  if (trials < 1000)
    throw std::invalid_argument("product_crofton_check: trials must be >= 1000");
  for (const CurveModel* c : {&c1, &c2})
    if (!c->on_sphere || c->ambient != 3 || !c->closed)
      throw std::invalid_argument(
          "product_crofton_check: factors must be closed curves on S^2");
  if (quadrature_nodes < 16)
    throw std::invalid_argument("product_crofton_check: need >= 16 quadrature nodes");

  const CurveGrid grid1 = sample_curve(c1, opts.resolution);
  const CurveGrid grid2 = sample_curve(c2, opts.resolution);

  const McResult mc = run_trials(trials, opts.threads, [&](std::int64_t trial) {
    for (int attempt = 0; attempt < opts.max_redraws; ++attempt) {
      RngStream rng(seed, static_cast<std::uint64_t>(trial),
                    static_cast<std::uint64_t>(attempt));
      const Eigen::VectorXd pole1 = rng.unit_vector(3);
      const Eigen::VectorXd pole2 = rng.unit_vector(3);
      const auto n1 = count_level_crossings(c1, grid1, pole1, 0.0, opts);
      if (!n1) continue;
      const auto n2 = count_level_crossings(c2, grid2, pole2, 0.0, opts);
      if (!n2) continue;
      return TrialOutcome{static_cast<double>(*n1) * static_cast<double>(*n2), attempt};
    }
    throw std::runtime_error("product_crofton_check: persistent non-transversal draws");
  });

  // Density side: (1/pi^2) integral over C1 x C2 of vol_{1,1} vol_{1,2},
  // evaluated through product_d1 of the embedded tangent-disk bodies on the
  // tangent frame of the parameterization.
  const QuadratureRule1D rule_s = trapezoid_periodic(quadrature_nodes, 1.0);
  const QuadratureRule1D rule_t = trapezoid_periodic(quadrature_nodes, 1.0);

  struct FactorNode {
    Eigen::MatrixXd body_form;  // 6x6 degenerate projector block
    Eigen::VectorXd tangent;    // embedded velocity
  };
  auto factor_nodes = [](const CurveModel& curve, const QuadratureRule1D& rule,
                         int slot) {
    std::vector<FactorNode> nodes;
    nodes.reserve(static_cast<std::size_t>(rule.nodes.size()));
    for (int k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      const Eigen::Vector3d y = curve.point(t);
      const Eigen::Vector3d v = curve.velocity(t);
      FactorNode node;
      node.body_form = Eigen::MatrixXd::Zero(6, 6);
      node.body_form.block(3 * slot, 3 * slot, 3, 3) =
          Eigen::Matrix3d::Identity() - y * y.transpose() / y.squaredNorm();
      node.tangent = Eigen::VectorXd::Zero(6);
      node.tangent.segment(3 * slot, 3) = v;
      nodes.push_back(std::move(node));
    }
    return nodes;
  };
  const auto nodes1 = factor_nodes(c1, rule_s, 0);
  const auto nodes2 = factor_nodes(c2, rule_t, 1);

  DensityOptions dopts;
  dopts.exact = true;

  double integral = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < nodes1.size(); ++i) {
    const CenteredEllipsoid body1(nodes1[i].body_form);
    for (std::size_t j = 0; j < nodes2.size(); ++j) {
      const CenteredEllipsoid body2(nodes2[j].body_form);
      Eigen::MatrixXd frame_mat(6, 2);
      frame_mat.col(0) = nodes1[i].tangent;
      frame_mat.col(1) = nodes2[j].tangent;
      const DensityValue prod =
          product_d1({body1, body2}, Frame(frame_mat), dopts);
      const double w =
          rule_s.weights[static_cast<int>(i)] * rule_t.weights[static_cast<int>(j)];
      const double term = w * 0.25 * prod.value - comp;
      const double next = integral + term;
      comp = (next - integral) - term;
      integral = next;
    }
  }
  const double density = integral / (kPi * kPi);

  ProductCroftonReport report;
  report.mc = CroftonEstimate{mc.mean, mc.std_error, mc.trials, mc.redraws};
  report.density_integral = density;
  report.relative_gap = std::abs(mc.mean - density) / std::max(std::abs(density), 1e-12);
  return report;
}

}  // namespace intgeo
