#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace laguerre_riesz::lab {

namespace fs = std::filesystem;

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

// <base>/<timestamp>-<label>, with -2, -3, ... appended when taken.
inline fs::path make_run_dir(const fs::path& base, const std::string& label) {
  fs::create_directories(base);
  const std::string stem = utc_timestamp() + "-" + label;
  fs::path dir = base / stem;
  for (int k = 2; !fs::create_directory(dir); ++k) dir = base / (stem + "-" + std::to_string(k));
  return dir;
}

// Write to a sibling temp file, then rename over the target.
inline void write_atomic(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

inline std::string samples_csv(const std::vector<ExperimentReport>& reports) {
  std::ostringstream os;
  write_samples_header(os);
  for (const auto& r : reports) write_samples(os, r);
  return os.str();
}

inline std::string config_text(const Config& cfg) {
  std::ostringstream os;
  cfg.write(os);
  return os.str();
}

// report.json, samples.csv and config.txt for one run.
inline void write_run(const fs::path& dir, const nlohmann::json& report, const std::vector<ExperimentReport>& reports,
                      const Config& cfg) {
  write_atomic(dir / "report.json", report.dump(2) + "\n");
  write_atomic(dir / "samples.csv", samples_csv(reports));
  write_atomic(dir / "config.txt", config_text(cfg));
}

}  // namespace laguerre_riesz::lab
