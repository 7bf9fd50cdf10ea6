#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "intgeo/acceptance.hpp"
#include "intgeo/bkk.hpp"
#include "intgeo/config_io.hpp"
#include "intgeo/crofton.hpp"
#include "intgeo/density.hpp"
#include "intgeo/mixed_volume.hpp"
#include "intgeo/report.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CommonArgs {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_path;
  std::string format = "json";
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--seed", args.seed, "root RNG seed (required; no wall-clock default)")
      ->required();
  sub->add_option("--threads", args.threads, "worker thread cap")
      ->check(CLI::PositiveNumber);
  sub->add_option("--output", args.output_path, "write the report to this path");
  sub->add_option("--format", args.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void emit(const intgeo::ExperimentReport& report, const CommonArgs& args) {
  const std::string text = args.format == "csv"
                               ? intgeo::report_to_csv(report)
                               : intgeo::report_to_json(report).dump(2) + "\n";
  std::cout << text;
  if (!args.output_path.empty()) {
    std::ofstream out(args.output_path);
    if (!out) throw std::invalid_argument("cannot write \"" + args.output_path + "\"");
    out << text;
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run_mixed_volume(const CommonArgs& args, const std::string& config_path,
                     std::int64_t trials, const std::string& method, int directions) {
  Stopwatch watch;
  const nlohmann::json config = intgeo::load_json_file(config_path);
  const std::vector<intgeo::CenteredEllipsoid> bodies = intgeo::bodies_from_json(config);

  intgeo::ExperimentReport report;
  report.command = "mixed-volume";
  report.seed = args.seed;
  report.inputs = {{"config", config},
                   {"trials", trials},
                   {"method", method},
                   {"directions", directions},
                   {"threads", args.threads}};

  if (method == "mc" || method == "both") {
    const auto est = intgeo::mixed_volume_mc(bodies, trials, args.seed, args.threads);
    report.results.push_back({"mixed_volume_mc", est.value, est.std_error, est.samples});
  }
  if (method == "oracle" || method == "both") {
    const auto est = intgeo::mixed_volume_oracle(bodies, directions);
    report.results.push_back({"mixed_volume_oracle", est.value, 0.0, est.samples});
  }
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

int run_density(const CommonArgs& args, const std::string& config_path, bool use_mc,
                std::int64_t trials, int directions) {
  Stopwatch watch;
  const nlohmann::json config = intgeo::load_json_file(config_path);
  const std::vector<intgeo::CenteredEllipsoid> bodies = intgeo::bodies_from_json(config);
  if (!config.contains("frame")) throw std::invalid_argument("config: missing \"frame\"");
  const intgeo::Frame frame =
      intgeo::frame_from_json(bodies.front().dim(), config["frame"]);

  intgeo::DensityOptions opts;
  opts.exact = !use_mc;
  opts.trials = trials;
  opts.directions = directions;
  opts.seed = args.seed;
  opts.threads = args.threads;

  intgeo::ExperimentReport report;
  report.command = "density";
  report.seed = args.seed;
  report.inputs = {{"config", config},
                   {"mc", use_mc},
                   {"trials", trials},
                   {"directions", directions},
                   {"threads", args.threads}};

  const auto d = intgeo::mixed_density(bodies, frame, opts);
  const auto p = intgeo::product_d1(bodies, frame, opts);
  const std::int64_t samples = use_mc ? trials : 0;
  report.results.push_back({"d_m", d.value, 0.0, samples});
  report.results.push_back({"product_d1", p.value, 0.0, samples});
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

intgeo::CurveModel euclid_curve(const std::string& name, const std::string& file,
                                int dim, double radius) {
  if (!file.empty()) return intgeo::curve_from_file(file);
  if (name == "segment") {
    Eigen::VectorXd from = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd to = Eigen::VectorXd::Zero(dim);
    to[0] = 1.0;
    return intgeo::segment_curve(from, to);
  }
  if (name == "circle") return intgeo::circle_curve(dim, radius);
  throw std::invalid_argument("--curve must be \"segment\" or \"circle\" (or use --curve-file)");
}

int run_crofton_euclid(const CommonArgs& args, const std::string& curve_name,
                       const std::string& curve_file, int dim, double radius,
                       std::int64_t trials, double range, int resolution) {
  Stopwatch watch;
  const intgeo::CurveModel curve = euclid_curve(curve_name, curve_file, dim, radius);
  if (range <= 0.0) {
    const double sup = intgeo::curve_sup_norm(curve, 512);
    range = std::max(2.0 * sup, sup + 1.0);
  }
  intgeo::CroftonOptions opts;
  opts.resolution = resolution;
  opts.threads = args.threads;

  intgeo::ExperimentReport report;
  report.command = "crofton-euclid";
  report.seed = args.seed;
  report.inputs = {{"curve", curve.name}, {"dim", curve.ambient},
                   {"radius", radius},   {"trials", trials},
                   {"range", range},     {"resolution", resolution},
                   {"threads", args.threads}};

  const auto est = intgeo::euclid_crofton_length(curve, trials, range, args.seed, opts);
  report.results.push_back({"length", est.value, est.std_error, est.trials});
  report.results.push_back({"redraws", static_cast<double>(est.redraws), 0.0, 0});
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

intgeo::CurveModel sphere_curve(const std::string& name, const std::string& file,
                                double colatitude) {
  if (!file.empty()) {
    const intgeo::CurveModel curve = intgeo::curve_from_file(file);
    if (!curve.on_sphere) throw std::invalid_argument("curve file must describe an S2 curve");
    return curve;
  }
  if (name == "great") return intgeo::great_circle();
  if (name == "small") return intgeo::small_circle(colatitude);
  throw std::invalid_argument("--curve must be \"great\" or \"small\" (or use --curve-file)");
}

int run_crofton_sphere(const CommonArgs& args, const std::string& curve_name,
                       const std::string& curve_file, double colatitude,
                       std::int64_t trials, int resolution) {
  Stopwatch watch;
  const intgeo::CurveModel curve = sphere_curve(curve_name, curve_file, colatitude);
  intgeo::CroftonOptions opts;
  opts.resolution = resolution;
  opts.threads = args.threads;

  intgeo::ExperimentReport report;
  report.command = "crofton-sphere";
  report.seed = args.seed;
  report.inputs = {{"curve", curve.name},
                   {"colatitude", colatitude},
                   {"trials", trials},
                   {"resolution", resolution},
                   {"threads", args.threads}};

  const auto est = intgeo::sphere_crofton_length(curve, trials, args.seed, opts);
  report.results.push_back({"length", est.value, est.std_error, est.trials});
  report.results.push_back({"redraws", static_cast<double>(est.redraws), 0.0, 0});
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

int run_crofton_product(const CommonArgs& args, const std::string& config_path,
                        const std::string& curve1, const std::string& curve2,
                        double colat1, double colat2, std::int64_t trials, int nodes,
                        int resolution) {
  Stopwatch watch;
  intgeo::CurveModel first = intgeo::great_circle();
  intgeo::CurveModel second = intgeo::great_circle();
  if (!config_path.empty()) {
    const intgeo::ProductCurves curves = intgeo::product_curves_from_file(config_path);
    first = curves.first;
    second = curves.second;
  } else {
    first = sphere_curve(curve1, "", colat1);
    second = sphere_curve(curve2, "", colat2);
  }
  intgeo::CroftonOptions opts;
  opts.resolution = resolution;
  opts.threads = args.threads;

  intgeo::ExperimentReport report;
  report.command = "crofton-product";
  report.seed = args.seed;
  report.inputs = {{"curve1", first.name},   {"curve2", second.name},
                   {"trials", trials},       {"quadrature_nodes", nodes},
                   {"resolution", resolution}, {"threads", args.threads}};

  const auto check =
      intgeo::product_crofton_check(first, second, trials, args.seed, opts, nodes);
  report.results.push_back({"mc", check.mc.value, check.mc.std_error, check.mc.trials});
  report.results.push_back({"density_integral", check.density_integral, 0.0, 0});
  report.results.push_back({"relative_gap", check.relative_gap, 0.0, 0});
  report.results.push_back({"redraws", static_cast<double>(check.mc.redraws), 0.0, 0});
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

int run_bkk_command(const CommonArgs& args, const std::string& config_path,
                    std::int64_t trials, int resolution, std::vector<int> nodes,
                    std::vector<double> ranges, double margin) {
  Stopwatch watch;
  const nlohmann::json config = intgeo::load_json_file(config_path);
  intgeo::SpacesConfig spaces = intgeo::spaces_from_json(config);

  intgeo::BkkExperiment experiment;
  experiment.spaces = std::move(spaces.spaces);
  const int n = spaces.domain.dim();
  experiment.trials = trials > 0 ? trials : (n == 1 ? 100000 : 30000);
  experiment.resolution = resolution;
  experiment.quad_nodes = std::move(nodes);
  experiment.ranges = std::move(ranges);
  experiment.range_margin = margin;
  experiment.seed = args.seed;
  experiment.threads = args.threads;

  const intgeo::BkkReport result = intgeo::run_bkk(experiment);

  intgeo::ExperimentReport report;
  report.command = "bkk";
  report.seed = args.seed;
  nlohmann::ordered_json used_ranges = nlohmann::ordered_json::array();
  for (double r : result.ranges) used_ranges.push_back(intgeo::round_to_significant(r));
  report.inputs = {{"config", config},
                   {"trials", experiment.trials},
                   {"resolution", experiment.resolution},
                   {"quad_nodes", experiment.quad_nodes},
                   {"ranges", used_ranges},
                   {"range_margin", margin},
                   {"threads", args.threads}};

  report.results.push_back(
      {"mc", result.mc.average, result.mc.std_error, result.mc.trials});
  report.results.push_back({"density", result.density_average, 0.0, 0});
  report.results.push_back({"mixed_volume", result.mixed_volume_average, 0.0, 0});
  report.results.push_back({"gap_mc_density", result.gap_mc_density, 0.0, 0});
  report.results.push_back({"gap_mc_mixedvol", result.gap_mc_mixedvol, 0.0, 0});
  report.results.push_back(
      {"gap_density_mixedvol", result.gap_density_mixedvol, 0.0, 0});
  report.results.push_back({"redraws", static_cast<double>(result.mc.redraws), 0.0, 0});
  report.results.push_back(
      {"inconclusive_cells", static_cast<double>(result.mc.inconclusive_cells), 0.0, 0});
  report.runtime_seconds = watch.seconds();
  emit(report, args);
  return 0;
}

int run_verify(bool full, std::uint64_t seed, int threads) {
  intgeo::AcceptanceOptions opts;
  opts.full = full;
  opts.seed = seed;
  opts.threads = threads;
  const auto outcomes = intgeo::run_acceptance(opts, std::cout);
  return intgeo::acceptance_passed(outcomes) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical integral geometry: mixed volumes, Crofton estimators, BKK runs"};
  app.set_version_flag("--version", intgeo::kToolVersion);
  app.require_subcommand(1);

  CommonArgs mv_args;
  std::string mv_config;
  std::int64_t mv_trials = 200000;
  std::string mv_method = "both";
  int mv_directions = 720;
  CLI::App* mixed = app.add_subcommand("mixed-volume", "mixed volume of ellipsoids");
  mixed->add_option("--config", mv_config, "JSON with {\"bodies\": [matrix, ...]}")
      ->required();
  mixed->add_option("--trials", mv_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  mixed->add_option("--method", mv_method, "estimator selection")
      ->check(CLI::IsMember({"mc", "oracle", "both"}));
  mixed->add_option("--directions", mv_directions, "oracle support directions");
  add_common(mixed, mv_args);

  CommonArgs dn_args;
  std::string dn_config;
  bool dn_mc = false;
  std::int64_t dn_trials = 200000;
  int dn_directions = 720;
  CLI::App* density = app.add_subcommand("density", "mixed density on a frame");
  density->add_option("--config", dn_config, "JSON with {\"bodies\": [...], \"frame\": [...]}")
      ->required();
  density->add_flag("--mc", dn_mc, "use the Monte Carlo mixed-volume kernel");
  density->add_option("--trials", dn_trials, "Monte Carlo trials (with --mc)");
  density->add_option("--directions", dn_directions, "oracle support directions");
  add_common(density, dn_args);

  CommonArgs ce_args;
  std::string ce_curve, ce_file;
  int ce_dim = 2;
  double ce_radius = 1.0;
  std::int64_t ce_trials = 100000;
  double ce_range = 0.0;
  int ce_resolution = 2048;
  CLI::App* euclid = app.add_subcommand("crofton-euclid", "Crofton length in R^d");
  euclid->add_option("--curve", ce_curve, "\"segment\" (unit) or \"circle\"");
  euclid->add_option("--curve-file", ce_file, "JSON curve description");
  euclid->add_option("--dim", ce_dim, "ambient dimension")->check(CLI::IsMember({2, 3}));
  euclid->add_option("--radius", ce_radius, "circle radius");
  euclid->add_option("--trials", ce_trials, "hyperplane samples")->check(CLI::PositiveNumber);
  euclid->add_option("--range", ce_range, "offset range R (0 = auto)");
  euclid->add_option("--resolution", ce_resolution, "root-scan cells along the curve");
  add_common(euclid, ce_args);

  CommonArgs cs_args;
  std::string cs_curve, cs_file;
  double cs_colatitude = kPi / 6;
  std::int64_t cs_trials = 100000;
  int cs_resolution = 2048;
  CLI::App* sphere = app.add_subcommand("crofton-sphere", "Crofton length on S^2");
  sphere->add_option("--curve", cs_curve, "\"great\" or \"small\"");
  sphere->add_option("--curve-file", cs_file, "JSON curve description");
  sphere->add_option("--colatitude", cs_colatitude, "small-circle colatitude");
  sphere->add_option("--trials", cs_trials, "pole samples")->check(CLI::PositiveNumber);
  sphere->add_option("--resolution", cs_resolution, "root-scan cells along the curve");
  add_common(sphere, cs_args);

  CommonArgs cp_args;
  std::string cp_config, cp_curve1, cp_curve2;
  double cp_colat1 = kPi / 6, cp_colat2 = kPi / 6;
  std::int64_t cp_trials = 100000;
  int cp_nodes = 128;
  int cp_resolution = 2048;
  CLI::App* product = app.add_subcommand("crofton-product",
                                         "product Crofton check on S^2 x S^2");
  product->add_option("--config", cp_config, "JSON with {\"space\": \"S2xS2\", \"factors\": [...]}");
  product->add_option("--curve1", cp_curve1, "\"great\" or \"small\"");
  product->add_option("--curve2", cp_curve2, "\"great\" or \"small\"");
  product->add_option("--colatitude1", cp_colat1, "colatitude for --curve1 small");
  product->add_option("--colatitude2", cp_colat2, "colatitude for --curve2 small");
  product->add_option("--trials", cp_trials, "pole-pair samples")->check(CLI::PositiveNumber);
  product->add_option("--nodes", cp_nodes, "quadrature nodes per factor");
  product->add_option("--resolution", cp_resolution, "root-scan cells along each curve");
  add_common(product, cp_args);

  CommonArgs bk_args;
  std::string bk_config;
  std::int64_t bk_trials = 0;
  int bk_resolution = 0;
  std::vector<int> bk_nodes;
  std::vector<double> bk_ranges;
  double bk_margin = 0.01;
  CLI::App* bkk = app.add_subcommand("bkk", "average zero count, three ways");
  bkk->add_option("--config", bk_config, "JSON function-space document")->required();
  bkk->add_option("--trials", bk_trials, "Monte Carlo trials (0 = default by dimension)");
  bkk->add_option("--resolution", bk_resolution, "root-scan cells per axis (0 = default)");
  bkk->add_option("--nodes", bk_nodes, "quadrature nodes per axis");
  bkk->add_option("--range", bk_ranges, "offset ranges (default: auto from sup |theta|)");
  bkk->add_option("--margin", bk_margin, "range margin over the gridded sup");
  add_common(bkk, bk_args);

  bool vf_quick = false, vf_full = false;
  std::uint64_t vf_seed = 20260819;
  int vf_threads = 1;
  CLI::App* verify = app.add_subcommand("verify", "run the release criteria");
  verify->add_flag("--quick", vf_quick, "reduced trial counts (about a minute)");
  verify->add_flag("--full", vf_full, "stated trial counts (several minutes)")
      ->excludes("--quick");
  verify->add_option("--seed", vf_seed, "root RNG seed");
  verify->add_option("--threads", vf_threads, "worker thread cap")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (mixed->parsed()) {
      return run_mixed_volume(mv_args, mv_config, mv_trials, mv_method, mv_directions);
    }
    if (density->parsed()) {
      return run_density(dn_args, dn_config, dn_mc, dn_trials, dn_directions);
    }
    if (euclid->parsed()) {
      return run_crofton_euclid(ce_args, ce_curve, ce_file, ce_dim, ce_radius, ce_trials,
                                ce_range, ce_resolution);
    }
    if (sphere->parsed()) {
      return run_crofton_sphere(cs_args, cs_curve, cs_file, cs_colatitude, cs_trials,
                                cs_resolution);
    }
    if (product->parsed()) {
      return run_crofton_product(cp_args, cp_config, cp_curve1, cp_curve2, cp_colat1,
                                 cp_colat2, cp_trials, cp_nodes, cp_resolution);
    }
    if (bkk->parsed()) {
      return run_bkk_command(bk_args, bk_config, bk_trials, bk_resolution, bk_nodes,
                             bk_ranges, bk_margin);
    }
    if (verify->parsed()) {
      return run_verify(vf_full, vf_seed, vf_threads);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
