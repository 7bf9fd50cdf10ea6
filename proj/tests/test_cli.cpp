#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef _WIN32
#include <sys/wait.h>
#endif

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string cli_binary() {
  const char* bin = std::getenv("INTGEO_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "INTGEO_BIN must point at the CLI binary");
  return bin;
}

std::string configs_dir() {
  const char* dir = std::getenv("INTGEO_CONFIGS");
  REQUIRE_MESSAGE(dir != nullptr, "INTGEO_CONFIGS must point at the configs directory");
  return dir;
}

CliResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.tmp";
  const std::string err_path = "cli_stderr.tmp";
  const std::string cmd =
      "\"" + cli_binary() + "\" " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  CliResult result;
#ifndef _WIN32
  if (WIFEXITED(status)) result.code = WEXITSTATUS(status);
#else
  result.code = status;
#endif
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return result;
}

nlohmann::json parse_report(const CliResult& result) {
  REQUIRE(result.code == 0);
  return nlohmann::json::parse(result.out);
}

double result_value(const nlohmann::json& report, const std::string& name) {
  for (const auto& row : report.at("results")) {
    if (row.at("name") == name) return row.at("value").get<double>();
  }
  FAIL("missing result row: ", name);
  return 0.0;
}

double result_std_error(const nlohmann::json& report, const std::string& name) {
  for (const auto& row : report.at("results")) {
    if (row.at("name") == name) return row.at("std_error").get<double>();
  }
  FAIL("missing result row: ", name);
  return 0.0;
}

std::string drop_runtime_lines(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("runtime_s") == std::string::npos) out << line << "\n";
  }
  return out.str();
}

}  // namespace

TEST_CASE("version flag") {
  const CliResult r = run_cli("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("crofton-euclid circle report") {
  const CliResult r =
      run_cli("crofton-euclid --curve circle --radius 1 --trials 20000 --seed 7");
  const nlohmann::json doc = parse_report(r);
  CHECK(doc.at("command") == "crofton-euclid");
  CHECK(doc.at("version") == "0.1.0");
  CHECK(doc.at("seed") == 7);
  CHECK(doc.at("inputs").at("trials") == 20000);

  const double length = result_value(doc, "length");
  const double se = result_std_error(doc, "length");
  CHECK(se > 0.0);
  CHECK(se < 0.06);
  CHECK(std::abs(length - 2.0 * kPi) <= 3.0 * se + 1e-9);
  CHECK(doc.at("runtime_s").get<double>() >= 0.0);
}

TEST_CASE("repeat run is identical apart from runtime") {
  const std::string cmd = "crofton-euclid --curve circle --trials 5000 --seed 9";
  const CliResult a = run_cli(cmd);
  const CliResult b = run_cli(cmd);
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  CHECK(drop_runtime_lines(a.out) == drop_runtime_lines(b.out));
  CHECK(drop_runtime_lines(a.out).find("\"length\"") != std::string::npos);
}

TEST_CASE("csv rows carry the json values") {
  const std::string cmd = "crofton-euclid --curve circle --trials 5000 --seed 11";
  const nlohmann::json doc = parse_report(run_cli(cmd + " --format json"));
  const CliResult csv = run_cli(cmd + " --format csv");
  CHECK(csv.code == 0);

  std::istringstream in(csv.out);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "command,name,value,std_error,trials,seed,runtime_s");

  bool found = false;
  while (std::getline(in, line)) {
    if (line.rfind("crofton-euclid,length,", 0) != 0) continue;
    found = true;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 7);
    CHECK(std::stod(fields[2]) == result_value(doc, "length"));
    CHECK(std::stod(fields[3]) == result_std_error(doc, "length"));
    CHECK(fields[4] == "5000");
    CHECK(fields[5] == "11");
  }
  CHECK(found);
}

TEST_CASE("output file duplicates stdout") {
  const std::string path = "cli_report.tmp.json";
  const CliResult r = run_cli("crofton-euclid --curve segment --trials 2000 --seed 3 --output " + path);
  CHECK(r.code == 0);
  const std::string file_text = slurp(path);
  std::remove(path.c_str());
  CHECK(file_text == r.out);
  const nlohmann::json doc = nlohmann::json::parse(file_text);
  CHECK(doc.at("command") == "crofton-euclid");
}

TEST_CASE("bkk on the decoupled config") {
  const CliResult r = run_cli("bkk --config " + configs_dir() +
                              "/decoupled_t2.json --trials 2000 --seed 1");
  const nlohmann::json doc = parse_report(r);
  const double expected = 4.0 * kPi * kPi;
  CHECK(std::abs(result_value(doc, "mc") - expected) < 1.2);
  CHECK(result_value(doc, "density") == doctest::Approx(expected).epsilon(1e-3));
  CHECK(result_value(doc, "mixed_volume") == doctest::Approx(expected).epsilon(1e-3));
  CHECK(result_value(doc, "gap_density_mixedvol") <= 1e-6);
  CHECK(result_value(doc, "inconclusive_cells") == 0.0);
  CHECK(doc.at("inputs").at("ranges").size() == 2);
  CHECK(doc.at("inputs").at("ranges")[0].get<double>() == doctest::Approx(1.01));
}

TEST_CASE("mixed-volume oracle on the balls config") {
  const CliResult r = run_cli("mixed-volume --config " + configs_dir() +
                              "/balls_r2.json --method oracle --seed 1");
  const nlohmann::json doc = parse_report(r);
  CHECK(doc.at("results").size() == 1);
  CHECK(result_value(doc, "mixed_volume_oracle") == doctest::Approx(kPi).epsilon(1e-4));
  CHECK(result_std_error(doc, "mixed_volume_oracle") == 0.0);
}

TEST_CASE("density on the segments config") {
  const CliResult r =
      run_cli("density --config " + configs_dir() + "/segments_frame.json --seed 2");
  const nlohmann::json doc = parse_report(r);
  CHECK(result_value(doc, "d_m") == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(result_value(doc, "product_d1") == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("config errors exit with code 2") {
  SUBCASE("missing seed") {
    const CliResult r = run_cli("crofton-euclid --curve circle --trials 100");
    CHECK(r.code == 2);
  }
  SUBCASE("unknown subcommand") {
    const CliResult r = run_cli("frobnicate --seed 1");
    CHECK(r.code == 2);
  }
  SUBCASE("nonexistent config") {
    const CliResult r = run_cli("bkk --config no_such_file.json --seed 1");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
  SUBCASE("range below the gridded sup") {
    const CliResult r = run_cli("bkk --config " + configs_dir() +
                                "/circle_t1.json --range 0.9 --trials 100 --seed 1");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
  }
}

TEST_CASE("verify quick profile") {
  const CliResult r = run_cli("verify --quick");
  CHECK(r.code == 0);
  CHECK(r.out.find("criterion 1 (") != std::string::npos);
  CHECK(r.out.find("criterion 9 (") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
