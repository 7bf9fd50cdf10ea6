#include "intgeo/bkk.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "intgeo/crofton.hpp"
#include "intgeo/density.hpp"
#include "intgeo/parallel.hpp"

namespace intgeo {

namespace {

void check_experiment(const BkkExperiment& experiment) {
  if (experiment.spaces.empty())
    throw std::invalid_argument("bkk: need at least one space");
  const ChartDomain& dom = experiment.spaces.front().domain();
  const int n = dom.dim();
  if (n < 1 || n > 2)
    throw std::invalid_argument("bkk: chart dimension must be 1 or 2");
  if (static_cast<int>(experiment.spaces.size()) != n)
    throw std::invalid_argument("bkk: need n spaces on an n-dim chart");
  for (const auto& s : experiment.spaces) {
    const ChartDomain& d = s.domain();
    bool same = d.dim() == n && d.kind() == dom.kind();
    for (int axis = 0; same && axis < n; ++axis)
      same = d.lower(axis) == dom.lower(axis) && d.upper(axis) == dom.upper(axis);
    if (!same) throw std::invalid_argument("bkk: spaces must share the chart");
  }
  if (experiment.range_margin < 0.01)
    throw std::invalid_argument("bkk: range margin must be >= 0.01");
}

int default_resolution(int n) { return n == 1 ? 1024 : 128; }

std::vector<int> default_quad_nodes(int n) {
  return std::vector<int>(static_cast<std::size_t>(n), n == 1 ? 256 : 96);
}

std::vector<int> quad_nodes_for(const BkkExperiment& experiment, int n) {
  if (experiment.quad_nodes.empty()) return default_quad_nodes(n);
  if (static_cast<int>(experiment.quad_nodes.size()) != n)
    throw std::invalid_argument("bkk: need one quadrature node count per axis");
  return experiment.quad_nodes;
}

std::vector<double> ranges_for(const BkkExperiment& experiment) {
  const auto sups = [&] {
    std::vector<double> s;
    s.reserve(experiment.spaces.size());
    const int nodes = experiment.spaces.front().domain().dim() == 1 ? 1024 : 256;
    for (const auto& space : experiment.spaces) s.push_back(sup_theta_norm(space, nodes));
    return s;
  }();
  if (experiment.ranges.empty()) {
    std::vector<double> r;
    r.reserve(sups.size());
    for (double s : sups) r.push_back((1.0 + experiment.range_margin) * s);
    return r;
  }
  if (experiment.ranges.size() != experiment.spaces.size())
    throw std::invalid_argument("bkk: need one offset range per space");
  for (std::size_t i = 0; i < sups.size(); ++i)
    if (!(experiment.ranges[i] >= 1.01 * sups[i]))
      throw std::invalid_argument("bkk: offset range below 1.01 * sup|theta|");
  return experiment.ranges;
}

}  // namespace

std::vector<double> auto_ranges(const std::vector<FunctionSpace>& spaces,
                                double margin) {
  if (spaces.empty()) throw std::invalid_argument("auto_ranges: no spaces");
  if (margin < 0.01) throw std::invalid_argument("auto_ranges: margin must be >= 0.01");
  const int nodes = spaces.front().domain().dim() == 1 ? 1024 : 256;
  std::vector<double> r;
  r.reserve(spaces.size());
  for (const auto& s : spaces) r.push_back((1.0 + margin) * sup_theta_norm(s, nodes));
  return r;
}

BkkMcResult average_zeros_mc(const BkkExperiment& experiment) {
  check_experiment(experiment);
  if (experiment.trials < 1000)
    throw std::invalid_argument("bkk: trials must be >= 1000");
  const ChartDomain& dom = experiment.spaces.front().domain();
  const int n = dom.dim();
  const int res =
      experiment.resolution > 0 ? experiment.resolution : default_resolution(n);
  if (res < 64) throw std::invalid_argument("bkk: resolution must be >= 64");
  const std::vector<double> ranges = ranges_for(experiment);

  // Node grids of each basis function (and the gradient data the margin
  // tests and tangency passes need); per trial only matrix-vector products
  // against the sampled coefficients remain.
  const int n_nodes_1d = res + 1;

  std::atomic<std::int64_t> inconclusive{0};
  McResult mc;

  if (n == 1) {
    const double lo = dom.lower(0);
    const double len = dom.axis_length(0);
    const bool periodic = dom.kind() == DomainKind::torus;
    const FunctionSpace& space = experiment.spaces.front();
    const int d = space.dim();

    Eigen::MatrixXd phi(n_nodes_1d, d), dphi(n_nodes_1d, d);
    for (int k = 0; k < n_nodes_1d; ++k) {
      Eigen::VectorXd x(1);
      x[0] = lo + len * k / res;
      phi.row(k) = space.theta(x).transpose();
      dphi.row(k) = space.gradient_matrix(x).col(0).transpose();
    }
    const double weight = 2.0 * ranges[0] / hyperplane_density_constant(d);

    mc = run_trials(experiment.trials, experiment.threads, [&](std::int64_t trial) {
      for (int attempt = 0; attempt < experiment.max_redraws; ++attempt) {
        RngStream rng(experiment.seed, static_cast<std::uint64_t>(trial),
                      static_cast<std::uint64_t>(attempt));
        const HyperplaneSample hp = sample_hyperplane(d, ranges[0], rng);
        Eigen::VectorXd vals = phi * hp.u;
        vals.array() -= hp.a;
        const Eigen::VectorXd ders = dphi * hp.u;
        auto f = [&](double t) {
          Eigen::VectorXd x(1);
          x[0] = t;
          return space.theta(x).dot(hp.u) - hp.a;
        };
        auto df = [&](double t) {
          Eigen::VectorXd x(1);
          x[0] = t;
          return space.gradient_matrix(x).col(0).dot(hp.u);
        };
        const LineScanResult scan =
            count_zeros_line(lo, len, periodic, vals, ders, f, df, experiment.roots);
        if (scan.non_transversal) continue;
        return TrialOutcome{weight * scan.count(), attempt};
      }
      throw std::runtime_error("bkk: persistent non-transversal draws");
    });
  } else {
    const int rows = n_nodes_1d * n_nodes_1d;
    const double x_lo = dom.lower(0), y_lo = dom.lower(1);
    const double hx = dom.axis_length(0) / res, hy = dom.axis_length(1) / res;

    struct SpaceData {
      Eigen::MatrixXd phi;        // rows x d node values, node r = i + j*(res+1)
      Eigen::VectorXd grad_sup;   // per-basis sup of |grad|
      const FunctionSpace* space = nullptr;
    };
    std::vector<SpaceData> data(2);
    for (int e = 0; e < 2; ++e) {
      const FunctionSpace& space = experiment.spaces[static_cast<std::size_t>(e)];
      SpaceData& sd = data[static_cast<std::size_t>(e)];
      sd.space = &space;
      sd.phi.resize(rows, space.dim());
      sd.grad_sup = Eigen::VectorXd::Zero(space.dim());
      Eigen::VectorXd x(2);
      for (int j = 0; j < n_nodes_1d; ++j) {
        for (int i = 0; i < n_nodes_1d; ++i) {
          x[0] = x_lo + i * hx;
          x[1] = y_lo + j * hy;
          const int r = i + j * n_nodes_1d;
          sd.phi.row(r) = space.theta(x).transpose();
          const Eigen::MatrixXd jac = space.gradient_matrix(x);
          for (int b = 0; b < space.dim(); ++b)
            sd.grad_sup[b] = std::max(sd.grad_sup[b], jac.row(b).norm());
        }
      }
    }
    const double weight0 =
        2.0 * ranges[0] / hyperplane_density_constant(data[0].space->dim());
    const double weight1 =
        2.0 * ranges[1] / hyperplane_density_constant(data[1].space->dim());

    mc = run_trials(experiment.trials, experiment.threads, [&](std::int64_t trial) {
      for (int attempt = 0; attempt < experiment.max_redraws; ++attempt) {
        RngStream rng(experiment.seed, static_cast<std::uint64_t>(trial),
                      static_cast<std::uint64_t>(attempt));
        const HyperplaneSample hp0 =
            sample_hyperplane(data[0].space->dim(), ranges[0], rng);
        const HyperplaneSample hp1 =
            sample_hyperplane(data[1].space->dim(), ranges[1], rng);

        std::array<Eigen::MatrixXd, 2> grids;
        std::array<double, 2> lip;
        const HyperplaneSample* hps[2] = {&hp0, &hp1};
        for (int e = 0; e < 2; ++e) {
          const SpaceData& sd = data[static_cast<std::size_t>(e)];
          Eigen::VectorXd flat = sd.phi * hps[e]->u;
          flat.array() -= hps[e]->a;
          grids[static_cast<std::size_t>(e)] =
              Eigen::Map<const Eigen::MatrixXd>(flat.data(), n_nodes_1d, n_nodes_1d);
          lip[static_cast<std::size_t>(e)] = sd.grad_sup.dot(hps[e]->u.cwiseAbs());
        }

        System2D system = [&](const Eigen::Vector2d& p, Eigen::Vector2d& fval,
                              Eigen::Matrix2d& jac) {
          Eigen::VectorXd q(2);
          q[0] = p[0];
          q[1] = p[1];
          for (int e = 0; e < 2; ++e) {
            const SpaceData& sd = data[static_cast<std::size_t>(e)];
            fval[e] = sd.space->theta(q).dot(hps[e]->u) - hps[e]->a;
            jac.row(e) =
                (hps[e]->u.transpose() * sd.space->gradient_matrix(q)).row(0);
          }
        };

        const CellScanResult scan = count_zeros_cells(dom, res, res, grids, lip,
                                                      system, experiment.roots);
        if (scan.non_transversal) continue;
        inconclusive.fetch_add(scan.inconclusive_cells);
        return TrialOutcome{weight0 * weight1 * scan.count(), attempt};
      }
      throw std::runtime_error("bkk: persistent non-transversal draws");
    });
  }

  BkkMcResult out;
  out.average = mc.mean;
  out.std_error = mc.std_error;
  out.trials = mc.trials;
  out.redraws = mc.redraws;
  out.inconclusive_cells = inconclusive.load();
  return out;
}

double average_zeros_density(const BkkExperiment& experiment) {
  check_experiment(experiment);
  const ChartDomain& dom = experiment.spaces.front().domain();
  const int n = dom.dim();
  const auto axes = dom.rules(quad_nodes_for(experiment, n));
  const Frame frame = Frame::standard(n, n);
  const double scale = std::pow(0.5, n);

  DensityOptions dopts;
  dopts.exact = true;
  dopts.threads = experiment.threads;

  return scale * integrate_tensor(axes, [&](const Eigen::VectorXd& x) {
    std::vector<CenteredEllipsoid> bodies;
    bodies.reserve(experiment.spaces.size());
    for (const auto& s : experiment.spaces) bodies.push_back(s.finsler_ellipsoid(x));
    return product_d1(bodies, frame, dopts).value;
  });
}

double average_zeros_mixedvol(const BkkExperiment& experiment) {
  check_experiment(experiment);
  const int n = experiment.spaces.front().domain().dim();
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  DensityOptions dopts;
  dopts.exact = true;
  dopts.threads = experiment.threads;
  return factorial * std::pow(0.5, n) *
         mixed_symplectic_volume(experiment.spaces, quad_nodes_for(experiment, n),
                                 dopts);
}

BkkReport run_bkk(const BkkExperiment& experiment) {
  BkkReport report;
  report.seed = experiment.seed;
  report.ranges = ranges_for(experiment);
  report.mc = average_zeros_mc(experiment);
  report.density_average = average_zeros_density(experiment);
  report.mixed_volume_average = average_zeros_mixedvol(experiment);

  auto gap = [](double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
  };
  report.gap_mc_density = gap(report.mc.average, report.density_average);
  report.gap_mc_mixedvol = gap(report.mc.average, report.mixed_volume_average);
  report.gap_density_mixedvol =
      gap(report.density_average, report.mixed_volume_average);
  return report;
}

}  // namespace intgeo
