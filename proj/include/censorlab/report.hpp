#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace censorlab {

// One certification line of a command report.
struct ReportEntry {
  std::string claim;
  std::string verdict;  // "certified" | "violated" | "notice"
  nlohmann::json witness = nlohmann::json::object();
  double tolerance = 0.0;
  uint64_t seed = 0;
  double wall_time = 0.0;  // ms, stays 0 unless timing was requested
};

ReportEntry certified(std::string claim, nlohmann::json witness,
                      double tolerance, uint64_t seed);
ReportEntry violated(std::string claim, nlohmann::json witness,
                     double tolerance, uint64_t seed);
ReportEntry notice(std::string claim, nlohmann::json witness, uint64_t seed);

nlohmann::json report_json(const std::vector<ReportEntry>& entries);
void write_report(const std::string& path,
                  const std::vector<ReportEntry>& entries);

// shortest round-trip decimal form, so reruns are byte-identical
std::string format_double(double v);

struct CsvWriter {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  explicit CsvWriter(std::vector<std::string> h) : header(std::move(h)) {}
  void row(std::vector<std::string> r);
  void save(const std::string& path) const;
};

// directory gate shared by the commands; throws config_error when missing
void require_out_dir(const std::string& dir);

std::string join_path(const std::string& dir, const std::string& name);

}  // namespace censorlab
