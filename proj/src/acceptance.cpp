#include "intgeo/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include <Eigen/Geometry>

#include "intgeo/bkk.hpp"
#include "intgeo/config_io.hpp"
#include "intgeo/crofton.hpp"
#include "intgeo/density.hpp"
#include "intgeo/finsler.hpp"
#include "intgeo/mixed_volume.hpp"
#include "intgeo/report.hpp"
#include "intgeo/rng.hpp"
#include "intgeo/roots.hpp"

namespace intgeo {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct CheckList {
  std::vector<std::string> lines;
  bool ok = true;

  void close(const std::string& name, double value, double target, double tol) {
    const double err = std::abs(value - target);
    const bool pass = err <= tol;
    ok = ok && pass;
    std::ostringstream line;
    line << (pass ? "ok   " : "FAIL ") << name << ": value "
         << format_significant(value) << ", target " << format_significant(target)
         << ", |err| " << format_significant(err) << " <= "
         << format_significant(tol);
    lines.push_back(line.str());
  }

  void is_true(const std::string& name, bool condition, const std::string& detail = {}) {
    ok = ok && condition;
    std::string line = (condition ? "ok   " : "FAIL ") + name;
    if (!detail.empty()) line += ": " + detail;
    lines.push_back(line);
  }
};

CenteredEllipsoid random_psd_body(int dim, RngStream& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int s = 0; s < dim; ++s) a(r, s) = rng.normal();
  }
  return CenteredEllipsoid(a.transpose() * a);
}

TrigMode mode1(int k, bool sine) {
  TrigMode mode;
  mode.wave = Eigen::VectorXi::Constant(1, k);
  mode.sine = sine;
  return mode;
}

TrigMode mode2(int k1, int k2, bool sine) {
  TrigMode mode;
  mode.wave.resize(2);
  mode.wave << k1, k2;
  mode.sine = sine;
  return mode;
}

FunctionSpace circle_space() {
  return trig_space(ChartDomain::torus(1), {mode1(1, false), mode1(1, true)});
}

std::vector<FunctionSpace> decoupled_spaces() {
  const ChartDomain dom = ChartDomain::torus(2);
  return {trig_space(dom, {mode2(1, 0, false), mode2(1, 0, true)}),
          trig_space(dom, {mode2(0, 1, false), mode2(0, 1, true)})};
}

std::vector<FunctionSpace> coupled_spaces() {
  const ChartDomain dom = ChartDomain::torus(2);
  const FunctionSpace v =
      trig_space(dom, {mode2(1, 0, false), mode2(1, 0, true), mode2(0, 1, false),
                       mode2(0, 1, true)});
  return {v, v};
}

FunctionSpace scale_space(const FunctionSpace& space, double lambda) {
  std::vector<BasisFunction> basis;
  for (const BasisFunction& f : space.basis()) {
    BasisFunction g;
    g.name = f.name;
    auto value = f.value;
    auto gradient = f.gradient;
    g.value = [value, lambda](const Eigen::VectorXd& x) { return lambda * value(x); };
    g.gradient = [gradient, lambda](const Eigen::VectorXd& x) {
      return Eigen::VectorXd(lambda * gradient(x));
    };
    basis.push_back(std::move(g));
  }
  return FunctionSpace(space.domain(), basis);
}

Equation random_trig_equation_1d(RngStream& rng) {
  const double c0 = 0.4 * rng.normal();
  const double c1 = rng.normal();
  const double s1 = rng.normal();
  const double c2 = 0.5 * rng.normal();
  const double s2 = 0.5 * rng.normal();
  Equation eq;
  eq.value = [=](const Eigen::VectorXd& x) {
    const double t = x[0];
    return c0 + c1 * std::cos(t) + s1 * std::sin(t) + c2 * std::cos(2 * t) +
           s2 * std::sin(2 * t);
  };
  eq.gradient = [=](const Eigen::VectorXd& x) {
    const double t = x[0];
    Eigen::VectorXd g(1);
    g[0] = -c1 * std::sin(t) + s1 * std::cos(t) - 2 * c2 * std::sin(2 * t) +
           2 * s2 * std::cos(2 * t);
    return g;
  };
  return eq;
}

Equation random_trig_equation_2d(RngStream& rng) {
  const std::array<std::array<double, 2>, 4> waves{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
  const std::array<double, 4> scales{1.0, 1.0, 0.6, 0.6};
  std::array<double, 4> cc{}, ss{};
  for (int k = 0; k < 4; ++k) {
    cc[k] = scales[k] * rng.normal();
    ss[k] = scales[k] * rng.normal();
  }
  const double c0 = 0.4 * rng.normal();
  Equation eq;
  eq.value = [=](const Eigen::VectorXd& x) {
    double acc = c0;
    for (int k = 0; k < 4; ++k) {
      const double phase = waves[k][0] * x[0] + waves[k][1] * x[1];
      acc += cc[k] * std::cos(phase) + ss[k] * std::sin(phase);
    }
    return acc;
  };
  eq.gradient = [=](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
    for (int k = 0; k < 4; ++k) {
      const double phase = waves[k][0] * x[0] + waves[k][1] * x[1];
      const double d = -cc[k] * std::sin(phase) + ss[k] * std::cos(phase);
      g[0] += d * waves[k][0];
      g[1] += d * waves[k][1];
    }
    return g;
  };
  return eq;
}

Equation shifted_equation(const Equation& eq, const Eigen::VectorXd& shift) {
  Equation out;
  auto value = eq.value;
  auto gradient = eq.gradient;
  out.value = [value, shift](const Eigen::VectorXd& x) {
    return value(Eigen::VectorXd(x + shift));
  };
  out.gradient = [gradient, shift](const Eigen::VectorXd& x) {
    return gradient(Eigen::VectorXd(x + shift));
  };
  return out;
}

double combined_3se(double a, double b) { return 3.0 * std::hypot(a, b); }

void criterion_mixed_volume(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 1000000 : 200000;

  const CenteredEllipsoid ball2 = CenteredEllipsoid::unit_ball(2);
  MixedVolumeEstimate est = mixed_volume_mc({ball2, ball2}, trials, o.seed + 11, o.threads);
  c.close("V(B,B) in R^2", est.value, kPi, 3 * est.std_error);

  const CenteredEllipsoid ball3 = CenteredEllipsoid::unit_ball(3);
  est = mixed_volume_mc({ball3, ball3, ball3}, trials, o.seed + 12, o.threads);
  c.close("V(B,B,B) in R^3", est.value, 4.0 * kPi / 3.0, 3 * est.std_error);

  Eigen::Matrix2d q1 = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d q2 = Eigen::Matrix2d::Zero();
  q1(0, 0) = 1.0;
  q2(1, 1) = 1.0;
  est = mixed_volume_mc({CenteredEllipsoid(q1), CenteredEllipsoid(q2)}, trials,
                        o.seed + 13, o.threads);
  c.close("orthogonal segments", est.value, 2.0, 0.005 * 2.0);

  const std::int64_t pair_trials = o.full ? 200000 : 50000;
  double worst_ratio = 0.0;
  bool pairs_ok = true;
  for (int k = 0; k < 20; ++k) {
    RngStream rng(o.seed + 14, static_cast<std::uint64_t>(k));
    std::vector<CenteredEllipsoid> pair{random_psd_body(2, rng), random_psd_body(2, rng)};
    const MixedVolumeEstimate mc =
        mixed_volume_mc(pair, pair_trials, o.seed + 40 + static_cast<std::uint64_t>(k),
                        o.threads);
    const MixedVolumeEstimate oracle = mixed_volume_oracle(pair, 720);
    const double tol = 3 * mc.std_error + 0.01 * oracle.value;
    const double err = std::abs(mc.value - oracle.value);
    pairs_ok = pairs_ok && err <= tol;
    worst_ratio = std::max(worst_ratio, err / tol);
  }
  c.is_true("mc vs oracle on 20 seeded PSD pairs", pairs_ok,
            "worst |err|/tol = " + format_significant(worst_ratio));
}

void criterion_direct_summand(const AcceptanceOptions& o, CheckList& c) {
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    RngStream rng(o.seed + 21, static_cast<std::uint64_t>(k));
    const int m = 2 + (k % 2);
    std::vector<int> dims;
    for (int i = 0; i < m; ++i) dims.push_back(rng.uniform() < 0.5 ? 1 : 2);
    const ProductStructure product(dims);
    const int ambient = product.ambient_dim();

    std::vector<CenteredEllipsoid> bodies;
    std::vector<Eigen::VectorXd> frame_vectors;
    double expected = 1.0;
    for (int i = 0; i < m; ++i) {
      const int f = dims[static_cast<std::size_t>(i)];
      const int off = product.factor_offset(i);
      Eigen::MatrixXd g(f, f);
      for (int r = 0; r < f; ++r) {
        for (int s = 0; s < f; ++s) g(r, s) = rng.normal();
      }
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(ambient, ambient);
      q.block(off, off, f, f) = g.transpose() * g;
      bodies.emplace_back(q);

      Eigen::VectorXd part;
      do {
        part = rng.gaussian_vector(f);
      } while (part.norm() < 0.3);
      Eigen::VectorXd xi = Eigen::VectorXd::Zero(ambient);
      xi.segment(off, f) = part;
      frame_vectors.push_back(xi);
      expected *= d1(bodies.back(), xi).value;
    }

    const double got =
        product_d1(bodies, Frame(ambient, frame_vectors), DensityOptions{}).value;
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  c.close("worst relative gap over 50 seeded cases", worst, 0.0, 0.01);
}

void criterion_euclid_crofton(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 100000 : 20000;
  CroftonOptions copts;
  copts.threads = o.threads;

  Eigen::Vector2d from(0.0, 0.0), to(1.0, 0.0);
  const CroftonEstimate seg =
      euclid_crofton_length(segment_curve(from, to), trials, 2.0, o.seed + 31, copts);
  c.close("unit segment", seg.value, 1.0, 3 * seg.std_error);

  const CurveModel circle = circle_curve(2, 1.0);
  const CroftonEstimate a = euclid_crofton_length(circle, trials, 2.0, o.seed + 32, copts);
  c.close("unit circle", a.value, 2 * kPi, 3 * a.std_error);

  const CroftonEstimate b = euclid_crofton_length(circle, trials, 4.0, o.seed + 33, copts);
  c.close("R-invariance (R=2 vs R=4)", a.value, b.value,
          combined_3se(a.std_error, b.std_error));
}

void criterion_sphere_crofton(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 100000 : 10000;
  CroftonOptions copts;
  copts.threads = o.threads;

  const CroftonEstimate great =
      sphere_crofton_length(great_circle(), trials, o.seed + 41, copts);
  c.close("great circle (exact up to redraws)", great.value, 2 * kPi,
          3 * great.std_error + 1e-8 * 2 * kPi);

  const CroftonEstimate small =
      sphere_crofton_length(small_circle(kPi / 6), trials, o.seed + 42, copts);
  c.close("small circle alpha=pi/6", small.value, kPi, 3 * small.std_error);
}

void criterion_product_crofton(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 100000 : 10000;
  CroftonOptions copts;
  copts.threads = o.threads;

  const ProductCroftonReport gg =
      product_crofton_check(great_circle(), great_circle(), trials, o.seed + 51, copts);
  c.close("great x great (mc)", gg.mc.value, 4.0, 3 * gg.mc.std_error + 4e-9);
  c.close("great x great (density)", gg.density_integral, 4.0, 0.01 * 4.0);

  const ProductCroftonReport gs = product_crofton_check(
      great_circle(), small_circle(kPi / 6), trials, o.seed + 52, copts);
  c.close("great x small (mc)", gs.mc.value, 2.0, 3 * gs.mc.std_error + 2e-9);
  c.close("great x small (density)", gs.density_integral, 2.0, 0.01 * 2.0);
}

void criterion_bkk_circle(const AcceptanceOptions& o, CheckList& c) {
  BkkExperiment experiment;
  experiment.spaces = {circle_space()};
  experiment.trials = o.full ? 100000 : 20000;
  experiment.seed = o.seed + 61;
  experiment.threads = o.threads;
  const BkkReport report = run_bkk(experiment);

  c.close("mc", report.mc.average, 2 * kPi, 3 * report.mc.std_error);
  c.close("density", report.density_average, 2 * kPi, 0.001 * 2 * kPi);
  c.close("mixed volume", report.mixed_volume_average, 2 * kPi, 0.001 * 2 * kPi);
}

void criterion_bkk_decoupled(const AcceptanceOptions& o, CheckList& c) {
  BkkExperiment experiment;
  experiment.spaces = decoupled_spaces();
  experiment.trials = o.full ? 30000 : 5000;
  experiment.seed = o.seed + 71;
  experiment.threads = o.threads;
  const BkkReport report = run_bkk(experiment);

  const double target = 4 * kPi * kPi;
  c.close("mc", report.mc.average, target, 3 * report.mc.std_error);
  c.close("density", report.density_average, target, 0.01 * target);
  c.close("mixed volume", report.mixed_volume_average, target, 0.01 * target);
}

void criterion_bkk_coupled(const AcceptanceOptions& o, CheckList& c) {
  BkkExperiment experiment;
  experiment.spaces = coupled_spaces();
  experiment.trials = o.full ? 30000 : 5000;
  experiment.seed = o.seed + 81;
  experiment.threads = o.threads;
  const BkkReport report = run_bkk(experiment);

  const double se3 = 3 * report.mc.std_error;
  c.close("mc vs density", report.mc.average, report.density_average,
          se3 + 0.02 * std::abs(report.density_average));
  c.close("mc vs mixed volume", report.mc.average, report.mixed_volume_average,
          se3 + 0.02 * std::abs(report.mixed_volume_average));
  c.close("density vs mixed volume", report.density_average,
          report.mixed_volume_average,
          0.02 * std::max(std::abs(report.density_average),
                          std::abs(report.mixed_volume_average)));
}

void property_mixed_volume(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 100000 : 20000;
  RngStream rng(o.seed + 91, 0);
  std::vector<CenteredEllipsoid> bodies{random_psd_body(3, rng), random_psd_body(3, rng),
                                        random_psd_body(3, rng)};
  std::vector<CenteredEllipsoid> permuted{bodies[2], bodies[0], bodies[1]};

  const MixedVolumeEstimate v1 = mixed_volume_mc(bodies, trials, o.seed + 92, o.threads);
  const MixedVolumeEstimate v2 = mixed_volume_mc(permuted, trials, o.seed + 93, o.threads);
  c.close("mv permutation symmetry (mc)", v1.value, v2.value,
          combined_3se(v1.std_error, v2.std_error));

  const MixedVolumeEstimate o1 = mixed_volume_oracle(bodies, 800);
  const MixedVolumeEstimate o2 = mixed_volume_oracle(permuted, 800);
  c.close("mv permutation symmetry (oracle)", o1.value, o2.value, 1e-9 * o1.value);

  std::vector<CenteredEllipsoid> scaled = bodies;
  scaled[0] = CenteredEllipsoid(4.0 * bodies[0].form());
  const MixedVolumeEstimate v3 = mixed_volume_mc(scaled, trials, o.seed + 92, o.threads);
  c.close("mv scaling multilinearity", v3.value, 2.0 * v1.value, 1e-10 * v1.value);

  Eigen::Matrix3d diag = Eigen::Vector3d(1.0, 4.0, 0.25).asDiagonal();
  const CenteredEllipsoid body(diag);
  const MixedVolumeEstimate v4 =
      mixed_volume_mc({body, body, body}, trials, o.seed + 94, o.threads);
  c.close("mv diagonal case", v4.value, unit_ball_volume(3) * std::sqrt(1.0 * 4.0 * 0.25),
          3 * v4.std_error);

  Eigen::Vector2d w(0.6, 0.8);
  const CenteredEllipsoid small_body = CenteredEllipsoid::unit_ball(2);
  const CenteredEllipsoid large_body(Eigen::Matrix2d(Eigen::Matrix2d::Identity() +
                                                     w * w.transpose()));
  const CenteredEllipsoid other = random_psd_body(2, rng);
  const double lo = mixed_volume_oracle({small_body, other}, 720).value;
  const double hi = mixed_volume_oracle({large_body, other}, 720).value;
  c.is_true("mv oracle monotonicity", hi >= lo - 1e-9,
            format_significant(hi) + " >= " + format_significant(lo));
}

void property_density(const AcceptanceOptions& o, CheckList& c) {
  RngStream rng(o.seed + 95, 0);
  std::vector<CenteredEllipsoid> bodies{random_psd_body(3, rng), random_psd_body(3, rng)};
  Eigen::VectorXd xi1 = rng.gaussian_vector(3);
  Eigen::VectorXd xi2 = rng.gaussian_vector(3);
  const Frame frame(3, {xi1, xi2});
  const DensityOptions exact;

  const double base = mixed_density(bodies, frame, exact).value;
  const double scaled =
      mixed_density(bodies, Frame(3, {Eigen::VectorXd(1.7 * xi1), xi2}), exact).value;
  c.close("density frame homogeneity", scaled, 1.7 * base, 1e-4 * 1.7 * base);

  const double degenerate =
      mixed_density(bodies, Frame(3, {xi1, Eigen::VectorXd(2.0 * xi1)}), exact).value;
  c.close("density frame degeneracy", degenerate, 0.0, 0.0);

  const double swapped = mixed_density({bodies[1], bodies[0]}, frame, exact).value;
  c.close("density body symmetry", swapped, base, 1e-9 * base);

  const double unimodular =
      mixed_density(bodies, Frame(3, {Eigen::VectorXd(xi1 + xi2), xi2}), exact).value;
  c.close("density basis invariance", unimodular, base, 1e-4 * base);

  const ProductStructure product({2, 2});
  const Eigen::VectorXd xi = rng.gaussian_vector(4);
  c.close("vol1 factor vs embedded d1", 2.0 * vol1_factor(product, 0, xi).value,
          d1(product.embedded_unit_ball(0), xi).value, 1e-12);
}

void property_finsler(const AcceptanceOptions& o, CheckList& c) {
  const FunctionSpace circle = circle_space();
  double worst_norm = 0.0;
  double worst_form = 0.0;
  for (int k = 0; k < 64; ++k) {
    Eigen::VectorXd x(1);
    x[0] = 2 * kPi * k / 64.0;
    worst_norm = std::max(worst_norm, std::abs(circle.theta(x).norm() - 1.0));
    worst_form =
        std::max(worst_form, std::abs(circle.finsler_ellipsoid(x).form()(0, 0) - 1.0));
  }
  c.close("circle space |theta| = 1", worst_norm, 0.0, 1e-12);
  c.close("circle space Q = 1", worst_form, 0.0, 1e-12);

  c.close("gradient check (trig)", max_gradient_mismatch(circle, 200, o.seed + 96), 0.0,
          1e-6);
  const FunctionSpace cubic = orthonormalize(
      poly_space(ChartDomain::box({-1.0}, {1.0}),
                 {Eigen::VectorXi::Constant(1, 0), Eigen::VectorXi::Constant(1, 1),
                  Eigen::VectorXi::Constant(1, 2)}),
      {128});
  c.close("gradient check (poly)", max_gradient_mismatch(cubic, 200, o.seed + 97), 0.0,
          1e-6);

  c.close("symplectic volume (circle space)", symplectic_volume(circle, {64}), 4 * kPi,
          1e-10 * 4 * kPi);
  c.close("mixed symplectic volume (decoupled)",
          mixed_symplectic_volume(decoupled_spaces(), {64, 64}), 8 * kPi * kPi,
          1e-9 * 8 * kPi * kPi);

  const FunctionSpace doubled = scale_space(circle, 2.0);
  c.close("symplectic scaling", symplectic_volume(doubled, {64}),
          2.0 * symplectic_volume(circle, {64}), 1e-12 * 8 * kPi);

  const ChartDomain dom2 = ChartDomain::torus(2);
  const FunctionSpace varying =
      trig_space(dom2, {mode2(1, 0, false), mode2(1, 0, true), mode2(0, 1, false),
                        mode2(0, 1, true), mode2(1, 1, false)});
  const double coarse = symplectic_volume(varying, {32, 32});
  const double fine = symplectic_volume(varying, {64, 64});
  c.close("quadrature convergence", coarse, fine, 0.001 * std::abs(fine));

  const std::vector<FunctionSpace> spaces = decoupled_spaces();
  double worst_product = 0.0;
  for (int k = 0; k < 8; ++k) {
    Eigen::VectorXd x(2);
    x << 2 * kPi * k / 8.0, 2 * kPi * ((k * 3) % 8) / 8.0;
    std::vector<CenteredEllipsoid> fields{spaces[0].finsler_ellipsoid(x),
                                          spaces[1].finsler_ellipsoid(x)};
    const double joint = product_d1(fields, Frame::standard(2, 2), DensityOptions{}).value;
    const double split = d1(fields[0], Eigen::Vector2d(1, 0)).value *
                         d1(fields[1], Eigen::Vector2d(0, 1)).value;
    worst_product = std::max(worst_product, std::abs(joint - split));
  }
  c.close("product rule at field level (decoupled)", worst_product, 0.0, 1e-6);
}

void property_roots(const AcceptanceOptions& o, CheckList& c) {
  const ChartDomain t1 = ChartDomain::torus(1);
  const ChartDomain t2 = ChartDomain::torus(2);

  Equation cosine;
  cosine.value = [](const Eigen::VectorXd& x) { return std::cos(x[0]); };
  cosine.gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Eigen::VectorXd::Constant(1, -std::sin(x[0])));
  };
  const RootSet cos_roots = count_roots({t1, {cosine}}, 256);
  c.is_true("cos x: two roots at pi/2, 3pi/2",
            cos_roots.count() == 2 &&
                std::abs(cos_roots.points[0][0] - kPi / 2) <= 1e-9 &&
                std::abs(cos_roots.points[1][0] - 3 * kPi / 2) <= 1e-9,
            "count " + std::to_string(cos_roots.count()));

  Equation cos_x, cos_y;
  cos_x.value = [](const Eigen::VectorXd& x) { return std::cos(x[0]); };
  cos_x.gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Eigen::Vector2d(-std::sin(x[0]), 0.0));
  };
  cos_y.value = [](const Eigen::VectorXd& x) { return std::cos(x[1]); };
  cos_y.gradient = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Eigen::Vector2d(0.0, -std::sin(x[1])));
  };
  const RootSet grid_roots = count_roots({t2, {cos_x, cos_y}}, 128);
  c.is_true("cos x1 = cos x2 = 0: four roots", grid_roots.count() == 4,
            "count " + std::to_string(grid_roots.count()));

  int shift_ok_1d = 0;
  double worst_residual = 0.0;
  for (int k = 0; k < 20; ++k) {
    RngStream rng(o.seed + 101, static_cast<std::uint64_t>(k));
    const Equation eq = random_trig_equation_1d(rng);
    Eigen::VectorXd shift(1);
    shift[0] = rng.uniform(0.0, 2 * kPi);
    const RootSet base = count_roots({t1, {eq}}, 128);
    const RootSet moved = count_roots({t1, {shifted_equation(eq, shift)}}, 128);
    bool match = base.count() == moved.count();
    for (int r = 0; match && r < moved.count(); ++r) {
      Eigen::VectorXd image(1);
      image[0] = moved.points[static_cast<std::size_t>(r)][0] + shift[0];
      double best = 1e300;
      for (const Eigen::VectorXd& p : base.points) {
        best = std::min(best, t1.distance(t1.reduce(image), p));
      }
      match = best <= 1e-8;
    }
    shift_ok_1d += match ? 1 : 0;
    for (const Eigen::VectorXd& p : base.points) {
      worst_residual = std::max(worst_residual, std::abs(eq.value(p)));
    }
  }
  c.is_true("translation equivariance (1-D)", shift_ok_1d == 20,
            std::to_string(shift_ok_1d) + "/20 draws");

  int shift_ok_2d = 0;
  for (int k = 0; k < 5; ++k) {
    RngStream rng(o.seed + 102, static_cast<std::uint64_t>(k));
    std::vector<Equation> eqs{random_trig_equation_2d(rng), random_trig_equation_2d(rng)};
    Eigen::VectorXd shift(2);
    shift << rng.uniform(0.0, 2 * kPi), rng.uniform(0.0, 2 * kPi);
    const RootSet base = count_roots({t2, eqs}, 96);
    const RootSet moved = count_roots(
        {t2, {shifted_equation(eqs[0], shift), shifted_equation(eqs[1], shift)}}, 96);
    bool match = base.count() == moved.count();
    for (int r = 0; match && r < moved.count(); ++r) {
      const Eigen::VectorXd image =
          t2.reduce(Eigen::VectorXd(moved.points[static_cast<std::size_t>(r)] + shift));
      double best = 1e300;
      for (const Eigen::VectorXd& p : base.points) {
        best = std::min(best, t2.distance(image, p));
      }
      match = best <= 1e-7;
    }
    shift_ok_2d += match ? 1 : 0;
    for (const Eigen::VectorXd& p : base.points) {
      worst_residual = std::max(worst_residual, std::abs(eqs[0].value(p)));
      worst_residual = std::max(worst_residual, std::abs(eqs[1].value(p)));
    }
  }
  c.is_true("translation equivariance (2-D)", shift_ok_2d == 5,
            std::to_string(shift_ok_2d) + "/5 draws");
  c.close("root residuals", worst_residual, 0.0, 1e-9);

  int stable_1d = 0, considered_1d = 0;
  for (int k = 0; k < 20; ++k) {
    RngStream rng(o.seed + 103, static_cast<std::uint64_t>(k));
    const Equation eq = random_trig_equation_1d(rng);
    const RootSet coarse = count_roots({t1, {eq}}, 128);
    double min_condition = 1e300;
    for (double s : coarse.condition) min_condition = std::min(min_condition, s);
    if (coarse.non_transversal || (coarse.count() > 0 && min_condition < 1e-7)) continue;
    ++considered_1d;
    const RootSet fine = count_roots({t1, {eq}}, 256);
    stable_1d += coarse.count() == fine.count() ? 1 : 0;
  }
  c.is_true("resolution stability (1-D)", stable_1d == considered_1d,
            std::to_string(stable_1d) + "/" + std::to_string(considered_1d));

  int stable_2d = 0, considered_2d = 0;
  for (int k = 0; k < 5; ++k) {
    RngStream rng(o.seed + 104, static_cast<std::uint64_t>(k));
    std::vector<Equation> eqs{random_trig_equation_2d(rng), random_trig_equation_2d(rng)};
    const RootSet coarse = count_roots({t2, eqs}, 96);
    double min_condition = 1e300;
    for (double s : coarse.condition) min_condition = std::min(min_condition, s);
    if (coarse.non_transversal || (coarse.count() > 0 && min_condition < 1e-7)) continue;
    ++considered_2d;
    const RootSet fine = count_roots({t2, eqs}, 192);
    stable_2d += coarse.count() == fine.count() ? 1 : 0;
  }
  c.is_true("resolution stability (2-D)", stable_2d == considered_2d,
            std::to_string(stable_2d) + "/" + std::to_string(considered_2d));
}

void property_crofton(const AcceptanceOptions& o, CheckList& c) {
  const std::int64_t trials = o.full ? 50000 : 10000;
  CroftonOptions copts;
  copts.threads = o.threads;

  const Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 3).normalized()).toRotationMatrix();

  const CurveModel circle3 = circle_curve(3, 1.0);
  const CroftonEstimate e1 = euclid_crofton_length(circle3, trials, 2.0, o.seed + 111, copts);
  const CroftonEstimate e2 =
      euclid_crofton_length(rotated_curve(circle3, rot), trials, 2.0, o.seed + 112, copts);
  c.close("euclid rotation invariance", e1.value, e2.value,
          combined_3se(e1.std_error, e2.std_error));

  const CurveModel band = small_circle(kPi / 4);
  const CroftonEstimate s1 = sphere_crofton_length(band, trials, o.seed + 113, copts);
  const CroftonEstimate s2 =
      sphere_crofton_length(rotated_curve(band, rot), trials, o.seed + 114, copts);
  c.close("sphere rotation invariance", s1.value, s2.value,
          combined_3se(s1.std_error, s2.std_error));

  const CurveModel circle2 = circle_curve(2, 1.0);
  const CroftonEstimate r3 = euclid_crofton_length(circle2, 1000, 2.0, o.seed + 115, copts);
  const CroftonEstimate r4 = euclid_crofton_length(circle2, 10000, 2.0, o.seed + 116, copts);
  const double expected_drop = std::sqrt(10.0);
  const double ratio_a = r3.std_error / r4.std_error;
  c.is_true("std error scaling 1e3 -> 1e4",
            ratio_a >= expected_drop / 1.5 && ratio_a <= expected_drop * 1.5,
            "ratio " + format_significant(ratio_a));
  if (o.full) {
    const CroftonEstimate r5 =
        euclid_crofton_length(circle2, 100000, 2.0, o.seed + 117, copts);
    const double ratio_b = r4.std_error / r5.std_error;
    c.is_true("std error scaling 1e4 -> 1e5",
              ratio_b >= expected_drop / 1.5 && ratio_b <= expected_drop * 1.5,
              "ratio " + format_significant(ratio_b));
  }

  TrigCoeffs coeffs;
  coeffs.constant = Eigen::Vector3d(0.15, -0.1, 1.0);
  coeffs.cos_coeff = Eigen::MatrixXd::Zero(3, 1);
  coeffs.sin_coeff = Eigen::MatrixXd::Zero(3, 1);
  coeffs.cos_coeff(0, 0) = 0.9;
  coeffs.sin_coeff(1, 0) = 0.7;
  coeffs.cos_coeff(2, 0) = 0.2;
  const CurveModel wobble = sphere_trig_curve(coeffs);
  c.close("velocity check (param curve)", max_velocity_mismatch(wobble, 200, o.seed + 118),
          0.0, 1e-6);
  const CroftonEstimate est = sphere_crofton_length(wobble, trials, o.seed + 119, copts);
  c.close("sphere param curve vs quadrature", est.value,
          curve_length_quadrature(wobble, 2048), 3 * est.std_error);
}

void property_bkk(const AcceptanceOptions& o, CheckList& c) {
  BkkExperiment base;
  base.spaces = {circle_space()};
  base.trials = o.full ? 20000 : 5000;
  base.seed = o.seed + 121;
  base.threads = o.threads;
  const BkkReport r1 = run_bkk(base);

  BkkExperiment doubled = base;
  doubled.spaces = {scale_space(base.spaces[0], 2.0)};
  const BkkReport r2 = run_bkk(doubled);
  c.close("bkk scale covariance (mc)", r2.mc.average, 2.0 * r1.mc.average,
          1e-12 * std::abs(r1.mc.average));
  c.close("bkk scale covariance (density)", r2.density_average, 2.0 * r1.density_average,
          1e-12 * r1.density_average);
  c.close("bkk scale covariance (mixed volume)", r2.mixed_volume_average,
          2.0 * r1.mixed_volume_average, 1e-12 * r1.mixed_volume_average);

  BkkExperiment wide = base;
  wide.ranges = {2.0 * r1.ranges[0]};
  const BkkReport r3 = run_bkk(wide);
  c.close("bkk R-invariance", r3.mc.average, r1.mc.average,
          combined_3se(r1.mc.std_error, r3.mc.std_error));

  BkkExperiment constant;
  constant.spaces = {constant_space(ChartDomain::torus(1))};
  constant.trials = 2000;
  constant.seed = o.seed + 122;
  constant.threads = o.threads;
  const BkkReport r4 = run_bkk(constant);
  c.is_true("bkk constant space gives zero",
            r4.mc.average == 0.0 && r4.density_average == 0.0 &&
                r4.mixed_volume_average == 0.0);

  const BkkReport again = run_bkk(base);
  c.is_true("bkk seed determinism (bitwise)",
            again.mc.average == r1.mc.average &&
                again.density_average == r1.density_average &&
                again.mixed_volume_average == r1.mixed_volume_average);

  BkkExperiment threaded = base;
  threaded.threads = 3;
  const BkkReport r5 = run_bkk(threaded);
  c.is_true("bkk thread-count independence (bitwise)",
            r5.mc.average == r1.mc.average && r5.mc.std_error == r1.mc.std_error);

  const CurveModel circle2 = circle_curve(2, 1.0);
  CroftonOptions copt1;
  copt1.threads = 1;
  CroftonOptions copt4;
  copt4.threads = 4;
  const CroftonEstimate c1 =
      euclid_crofton_length(circle2, 10000, 2.0, o.seed + 123, copt1);
  const CroftonEstimate c2 =
      euclid_crofton_length(circle2, 10000, 2.0, o.seed + 123, copt4);
  c.is_true("crofton thread-count independence (bitwise)",
            c1.value == c2.value && c1.std_error == c2.std_error);

  const CenteredEllipsoid ball = CenteredEllipsoid::unit_ball(2);
  const MixedVolumeEstimate m1 = mixed_volume_mc({ball, ball}, 50000, o.seed + 124, 1);
  const MixedVolumeEstimate m2 = mixed_volume_mc({ball, ball}, 50000, o.seed + 124, 4);
  const MixedVolumeEstimate m3 = mixed_volume_mc({ball, ball}, 50000, o.seed + 124, 1);
  c.is_true("mixed volume seed/thread determinism (bitwise)",
            m1.value == m2.value && m1.value == m3.value &&
                m1.std_error == m2.std_error);
}

void criterion_properties(const AcceptanceOptions& o, CheckList& c) {
  property_mixed_volume(o, c);
  property_density(o, c);
  property_finsler(o, c);
  property_roots(o, c);
  property_crofton(o, c);
  property_bkk(o, c);
}

struct CriterionEntry {
  int index;
  const char* label;
  double budget_seconds;  // 0 = no stated budget
  void (*run)(const AcceptanceOptions&, CheckList&);
};

constexpr CriterionEntry kCriteria[] = {
    {1, "mixed-volume kernel", 30, criterion_mixed_volume},
    {2, "product rule on direct summands", 10, criterion_direct_summand},
    {3, "Euclidean Crofton", 60, criterion_euclid_crofton},
    {4, "sphere Crofton", 60, criterion_sphere_crofton},
    {5, "product Crofton", 90, criterion_product_crofton},
    {6, "BKK n=1, circle space", 60, criterion_bkk_circle},
    {7, "BKK n=2, decoupled", 300, criterion_bkk_decoupled},
    {8, "BKK n=2, coupled", 600, criterion_bkk_coupled},
    {9, "module property suites", 0, criterion_properties},
};

}  // namespace

std::vector<CriterionOutcome> run_acceptance(const AcceptanceOptions& opts,
                                             std::ostream& log) {
  std::vector<CriterionOutcome> outcomes;
  for (const CriterionEntry& entry : kCriteria) {
    CheckList checks;
    const auto start = std::chrono::steady_clock::now();
    entry.run(opts, checks);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.budget_seconds > 0) {
      std::ostringstream line;
      const bool in_budget = seconds < entry.budget_seconds;
      checks.ok = checks.ok && in_budget;
      line << (in_budget ? "ok   " : "FAIL ") << "runtime "
           << format_significant(seconds, 3) << " s < "
           << format_significant(entry.budget_seconds, 3) << " s";
      checks.lines.push_back(line.str());
    }

    CriterionOutcome outcome;
    outcome.index = entry.index;
    outcome.label = entry.label;
    outcome.passed = checks.ok;
    outcome.seconds = seconds;
    outcome.checks = std::move(checks.lines);

    log << "criterion " << outcome.index << " (" << outcome.label << "): "
        << (outcome.passed ? "pass" : "FAIL") << "  [" << format_significant(seconds, 3)
        << " s]\n";
    if (!outcome.passed) {
      for (const std::string& line : outcome.checks) log << "    " << line << "\n";
    }
    log.flush();
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

bool acceptance_passed(const std::vector<CriterionOutcome>& outcomes) {
  for (const CriterionOutcome& outcome : outcomes) {
    if (!outcome.passed) return false;
  }
  return true;
}

}  // namespace intgeo
