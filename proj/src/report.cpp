#include "intgeo/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace intgeo {

double round_to_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, value);
  return std::strtod(buf, nullptr);
}

std::string format_significant(double value, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << value;
  return out.str();
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  doc["version"] = kToolVersion;
  doc["seed"] = report.seed;
  doc["inputs"] = report.inputs;
  auto rows = nlohmann::ordered_json::array();
  for (const ResultRow& row : report.results) {
    nlohmann::ordered_json item;
    item["name"] = row.name;
    item["value"] = round_to_significant(row.value);
    item["std_error"] = round_to_significant(row.std_error);
    item["trials"] = row.trials;
    rows.push_back(std::move(item));
  }
  doc["results"] = std::move(rows);
  doc["runtime_s"] = report.runtime_seconds;
  return doc;
}

ExperimentReport report_from_json(const nlohmann::ordered_json& doc) {
  ExperimentReport report;
  report.command = doc.at("command").get<std::string>();
  report.seed = doc.at("seed").get<std::uint64_t>();
  report.inputs = doc.at("inputs");
  for (const auto& item : doc.at("results")) {
    ResultRow row;
    row.name = item.at("name").get<std::string>();
    row.value = item.at("value").get<double>();
    row.std_error = item.at("std_error").get<double>();
    row.trials = item.at("trials").get<std::int64_t>();
    report.results.push_back(std::move(row));
  }
  report.runtime_seconds = doc.at("runtime_s").get<double>();
  return report;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "command,name,value,std_error,trials,seed,runtime_s\n";
  for (const ResultRow& row : report.results) {
    out << report.command << ',' << row.name << ','
        << format_significant(round_to_significant(row.value)) << ','
        << format_significant(round_to_significant(row.std_error)) << ','
        << row.trials << ',' << report.seed << ','
        << format_significant(report.runtime_seconds) << '\n';
  }
  return out.str();
}

}  // namespace intgeo
