#include "censorlab/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "censorlab/errors.hpp"

namespace censorlab {

ReportEntry certified(std::string claim, nlohmann::json witness,
                      double tolerance, uint64_t seed) {
  return {std::move(claim), "certified", std::move(witness), tolerance, seed,
          0.0};
}

ReportEntry violated(std::string claim, nlohmann::json witness,
                     double tolerance, uint64_t seed) {
  return {std::move(claim), "violated", std::move(witness), tolerance, seed,
          0.0};
}

ReportEntry notice(std::string claim, nlohmann::json witness, uint64_t seed) {
  return {std::move(claim), "notice", std::move(witness), 0.0, seed, 0.0};
}

nlohmann::json report_json(const std::vector<ReportEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"claim", e.claim},
                   {"verdict", e.verdict},
                   {"witness", e.witness},
                   {"tolerance", e.tolerance},
                   {"seed", e.seed},
                   {"wall_time", e.wall_time}});
  }
  return arr;
}

void write_report(const std::string& path,
                  const std::vector<ReportEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write report file: " + path);
  out << report_json(entries).dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void CsvWriter::row(std::vector<std::string> r) {
  if (r.size() != header.size())
    throw config_error("csv row width does not match header");
  rows.push_back(std::move(r));
}

void CsvWriter::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write csv file: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << "\n";
  }
}

void require_out_dir(const std::string& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw config_error("output directory does not exist: " + dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace censorlab
