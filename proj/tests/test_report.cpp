#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "intgeo/config_io.hpp"
#include "intgeo/report.hpp"

using intgeo::ExperimentReport;
using intgeo::ResultRow;
using nlohmann::json;

namespace {

const double kPi = 3.14159265358979323846;

ExperimentReport sample_report() {
  ExperimentReport r;
  r.command = "crofton-euclid";
  r.seed = 7;
  r.inputs = {{"curve", "circle"}, {"radius", 1.0}, {"trials", 100000}};
  r.results.push_back(ResultRow{"length", 2.0 * kPi, 0.0123456789012345, 100000});
  r.results.push_back(ResultRow{"redraws", 0.0, 0.0, 0});
  r.runtime_seconds = 1.25;
  return r;
}

std::string drop_runtime(const nlohmann::ordered_json& doc) {
  nlohmann::ordered_json copy = doc;
  copy.erase("runtime_s");
  return copy.dump(2);
}

}  // namespace

TEST_CASE("rounding to significant digits") {
  const double rounded = intgeo::round_to_significant(kPi);
  CHECK(rounded == doctest::Approx(kPi).epsilon(1e-11));
  CHECK(rounded != kPi);  // 12 digits genuinely truncate
  CHECK(intgeo::round_to_significant(rounded) == rounded);

  CHECK(intgeo::round_to_significant(0.0) == 0.0);
  CHECK(intgeo::round_to_significant(-kPi) == -intgeo::round_to_significant(kPi));
  CHECK(intgeo::round_to_significant(1.0) == 1.0);
  CHECK(intgeo::round_to_significant(123456789.0) == 123456789.0);
  CHECK(std::isfinite(intgeo::round_to_significant(1.23456789012345e-300)));
  CHECK(intgeo::round_to_significant(2.0 * kPi, 4) == doctest::Approx(6.283));

  CHECK(intgeo::format_significant(2.0) == "2");
  CHECK(intgeo::format_significant(0.5) == "0.5");
  CHECK(intgeo::format_significant(intgeo::round_to_significant(kPi)) ==
        "3.14159265359");
}

TEST_CASE("json round trip") {
  const ExperimentReport r = sample_report();
  const nlohmann::ordered_json doc = intgeo::report_to_json(r);

  // Fixed key order with runtime last.
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() == 6);
  CHECK(keys[0] == "command");
  CHECK(keys[1] == "version");
  CHECK(keys[2] == "seed");
  CHECK(keys[3] == "inputs");
  CHECK(keys[4] == "results");
  CHECK(keys[5] == "runtime_s");

  // Stored values carry the 12-digit rounding.
  CHECK(doc["results"][0]["value"].get<double>() ==
        intgeo::round_to_significant(2.0 * kPi));

  const ExperimentReport parsed = intgeo::report_from_json(doc);
  CHECK(parsed.command == r.command);
  CHECK(parsed.seed == r.seed);
  CHECK(parsed.results.size() == r.results.size());
  CHECK(parsed.results[0].name == "length");
  CHECK(parsed.results[0].trials == 100000);
  CHECK(intgeo::report_to_json(parsed).dump() == doc.dump());
}

TEST_CASE("identical runs serialize identically apart from runtime") {
  ExperimentReport a = sample_report();
  ExperimentReport b = sample_report();
  b.runtime_seconds = 99.0;
  const auto da = intgeo::report_to_json(a);
  const auto db = intgeo::report_to_json(b);
  CHECK(da.dump(2) != db.dump(2));
  CHECK(drop_runtime(da) == drop_runtime(db));
}

TEST_CASE("csv rendering") {
  const std::string csv = intgeo::report_to_csv(sample_report());
  std::istringstream lines(csv);
  std::string header, row;
  REQUIRE(std::getline(lines, header));
  CHECK(header == "command,name,value,std_error,trials,seed,runtime_s");
  REQUIRE(std::getline(lines, row));

  std::vector<std::string> fields;
  std::istringstream splitter(row);
  std::string fieldv;
  while (std::getline(splitter, fieldv, ',')) fields.push_back(fieldv);
  REQUIRE(fields.size() == 7);
  CHECK(fields[0] == "crofton-euclid");
  CHECK(fields[1] == "length");
  // The CSV value parses back to exactly the JSON-stored double.
  const auto doc = intgeo::report_to_json(sample_report());
  CHECK(std::stod(fields[2]) == doc["results"][0]["value"].get<double>());
  CHECK(fields[4] == "100000");
  CHECK(fields[5] == "7");
}

TEST_CASE("domain parsing") {
  const auto torus = intgeo::domain_from_json(json::parse(
      R"({"kind": "torus", "dim": 2})"));
  CHECK(torus.dim() == 2);
  CHECK(torus.period(0) == doctest::Approx(2.0 * kPi));

  const auto stretched = intgeo::domain_from_json(json::parse(
      R"({"kind": "torus", "dim": 1, "periods": [1.0]})"));
  CHECK(stretched.period(0) == doctest::Approx(1.0));

  const auto box = intgeo::domain_from_json(json::parse(
      R"({"kind": "box", "dim": 2, "bounds": [[-1, 1], [0, 2]]})"));
  CHECK(box.lower(1) == doctest::Approx(0.0));
  CHECK(box.upper(0) == doctest::Approx(1.0));

  CHECK_THROWS_AS(intgeo::domain_from_json(json::parse(R"({"kind": "weird", "dim": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(intgeo::domain_from_json(json::parse(R"({"dim": 1})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      intgeo::domain_from_json(json::parse(R"({"kind": "box", "dim": 1})")),
      std::invalid_argument);
}

TEST_CASE("space parsing") {
  const auto doc = json::parse(R"({
    "domain": {"kind": "torus", "dim": 2},
    "spaces": [
      {"type": "trig", "modes": [[[1, 0], "cos"], [[1, 0], "sin"]]},
      {"type": "trig", "modes": [[[0, 1], "cos"], [[0, 1], "sin"]]}
    ]
  })");
  const auto config = intgeo::spaces_from_json(doc);
  REQUIRE(config.spaces.size() == 2);
  CHECK(config.domain.dim() == 2);
  CHECK(config.spaces[0].dim() == 2);
  Eigen::VectorXd x(2);
  x << 0.0, 0.0;
  CHECK(config.spaces[0].theta(x)(0) == doctest::Approx(1.0));
  CHECK(config.spaces[1].theta(x)(1) == doctest::Approx(0.0));

  const auto poly = intgeo::space_from_json(
      intgeo::ChartDomain::box({-1.0}, {1.0}),
      json::parse(R"({"type": "poly", "exponents": [[0], [1], [2]],
                      "orthonormalize": true, "orthonormalize_nodes": 48})"));
  CHECK(poly.dim() == 3);
  CHECK(intgeo::max_gradient_mismatch(poly, 50, 4) <= 1e-6);

  CHECK_THROWS_AS(
      intgeo::space_from_json(intgeo::ChartDomain::torus(1),
                              json::parse(R"({"type": "warped"})")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      intgeo::space_from_json(intgeo::ChartDomain::torus(1),
                              json::parse(R"({"type": "trig", "modes": []})")),
      std::invalid_argument);
  CHECK_THROWS_AS(intgeo::spaces_from_json(json::parse(R"({"spaces": []})")),
                  std::invalid_argument);
}

TEST_CASE("curve parsing") {
  const auto seg = intgeo::curve_from_json(json::parse(
      R"({"space": "R2", "type": "segment", "from": [0, 0], "to": [3, 4]})"));
  CHECK(intgeo::curve_length_quadrature(seg, 64) == doctest::Approx(5.0));

  const auto circle = intgeo::curve_from_json(json::parse(
      R"({"space": "R2", "type": "circle", "radius": 2.0})"));
  CHECK(intgeo::curve_length_quadrature(circle, 512) ==
        doctest::Approx(4.0 * kPi).epsilon(1e-10));

  const auto great = intgeo::curve_from_json(json::parse(
      R"({"space": "S2", "type": "circle"})"));
  CHECK(great.on_sphere);

  const auto small = intgeo::curve_from_json(json::parse(
      R"({"space": "S2", "type": "small_circle", "colatitude": 0.5})"));
  CHECK(intgeo::curve_length_quadrature(small, 512) ==
        doctest::Approx(2.0 * kPi * std::sin(0.5)).epsilon(1e-10));

  // Planar parametric curve with a rotation applied afterwards.
  const auto rotated = intgeo::curve_from_json(json::parse(R"({
    "space": "R2", "type": "param",
    "cos": [[1.0], [0.0]], "sin": [[0.0], [1.0]],
    "rotation": [[0.0, -1.0], [1.0, 0.0]]
  })"));
  CHECK(intgeo::curve_length_quadrature(rotated, 512) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-10));
  CHECK(intgeo::max_velocity_mismatch(rotated, 50, 8) <= 1e-6);

  const auto product = intgeo::product_curves_from_json(json::parse(R"({
    "space": "S2xS2",
    "factors": [{"type": "circle"},
                {"type": "small_circle", "colatitude": 0.7}]
  })"));
  CHECK(product.first.on_sphere);
  CHECK(intgeo::curve_length_quadrature(product.second, 512) ==
        doctest::Approx(2.0 * kPi * std::sin(0.7)).epsilon(1e-10));

  CHECK_THROWS_AS(intgeo::curve_from_json(json::parse(
                      R"({"space": "S2xS2", "factors": []})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(intgeo::curve_from_json(json::parse(
                      R"({"space": "R2", "type": "segment", "from": [0, 0]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(intgeo::curve_from_json(json::parse(
                      R"({"space": "R4", "type": "circle"})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(intgeo::product_curves_from_json(json::parse(R"({
                    "space": "S2xS2",
                    "factors": [{"space": "R2", "type": "circle"},
                                {"type": "circle"}]
                  })")),
                  std::invalid_argument);
}

TEST_CASE("bodies and frames") {
  const auto doc = json::parse(R"({
    "bodies": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]],
    "frame": [[1.0, 0.0], [0.0, 1.0]]
  })");
  const auto bodies = intgeo::bodies_from_json(doc);
  REQUIRE(bodies.size() == 2);
  CHECK(bodies[0].dim() == 2);
  const auto frame = intgeo::frame_from_json(2, doc["frame"]);
  CHECK(frame.size() == 2);
  CHECK(intgeo::product_d1(bodies, frame, intgeo::DensityOptions{}).value ==
        doctest::Approx(4.0).epsilon(1e-12));

  CHECK_THROWS_AS(intgeo::bodies_from_json(json::parse(R"({"bodies": []})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      intgeo::bodies_from_json(json::parse(R"({"bodies": [[[1, 0], [0]]]})")),
      std::invalid_argument);
  CHECK_THROWS_AS(intgeo::frame_from_json(3, doc["frame"]), std::invalid_argument);
  // Non-PSD body matrices are rejected by the body constructor.
  CHECK_THROWS_AS(
      intgeo::bodies_from_json(json::parse(R"({"bodies": [[[1, 0], [0, -1]]]})")),
      std::invalid_argument);
}

TEST_CASE("file loading") {
  CHECK_THROWS_AS(intgeo::load_json_file("/nonexistent/path.json"),
                  std::invalid_argument);

  const std::string path = "test_report_tmp_config.json";
  {
    std::ofstream out(path);
    out << R"({"domain": {"kind": "torus", "dim": 1},
               "spaces": [{"type": "trig", "modes": [[[1], "cos"], [[1], "sin"]]}]})";
  }
  const auto config = intgeo::spaces_from_file(path);
  CHECK(config.spaces.size() == 1);
  CHECK(config.spaces[0].dim() == 2);
  std::remove(path.c_str());

  const std::string bad = "test_report_tmp_bad.json";
  {
    std::ofstream out(bad);
    out << "{ not json";
  }
  CHECK_THROWS_AS(intgeo::load_json_file(bad), std::invalid_argument);
  std::remove(bad.c_str());
}
