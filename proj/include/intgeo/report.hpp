#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace intgeo {

inline constexpr const char* kToolVersion = "0.1.0";

// One named scalar estimate. std_error is 0 for deterministic quantities,
// trials is 0 when the value is not sample-based.
struct ResultRow {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

struct ExperimentReport {
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::ordered_json inputs;  // effective parameters, echoed back
  std::vector<ResultRow> results;
  double runtime_seconds = 0.0;
};

// Rounds to `digits` significant decimal digits (the printed precision).
double round_to_significant(double value, int digits = 12);

// Prints with `digits` significant digits, trailing zeros stripped.
std::string format_significant(double value, int digits = 12);

// Key order is fixed so identical (config, seed) runs serialize to identical
// bytes apart from the trailing runtime field. Values are stored rounded to
// 12 significant digits; runtime is stored as-is.
nlohmann::ordered_json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::ordered_json& doc);

// Header plus one row per result: command,name,value,std_error,trials,seed,runtime_s
std::string report_to_csv(const ExperimentReport& report);

}  // namespace intgeo
