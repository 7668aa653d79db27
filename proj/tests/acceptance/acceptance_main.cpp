#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "laguerre_riesz/lab/acceptance.hpp"

#ifndef LAGUERRE_RIESZ_CLI_PATH
#error "LAGUERRE_RIESZ_CLI_PATH must name the laguerre-riesz executable"
#endif

namespace fs = std::filesystem;
namespace lab = laguerre_riesz::lab;

namespace {

constexpr std::uint64_t kSeed = 7;

void line(bool passed, int id, const std::string& title, double seconds, const std::string& detail) {
  std::printf("%s  criterion %2d  %-45s %8.2f s\n", passed ? "PASS" : "FAIL", id, title.c_str(), seconds);
  if (!detail.empty()) std::printf("      %s\n", detail.c_str());
  std::fflush(stdout);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `laguerre-riesz verify --seed 7` into a fresh directory and returns its samples.csv.
bool cli_verify(const fs::path& base, std::string& samples, std::string& why) {
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string cmd = std::string("\"") + LAGUERRE_RIESZ_CLI_PATH + "\" verify --seed " + std::to_string(kSeed) +
                          " --out \"" + base.string() + "\" > \"" + (base / "stdout.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) {
    why = "could not start the CLI";
    return false;
  }
  for (const auto& entry : fs::directory_iterator(base)) {
    if (entry.is_directory() && fs::exists(entry.path() / "samples.csv")) {
      samples = slurp(entry.path() / "samples.csv");
      return true;
    }
  }
  why = "no samples.csv under " + base.string();
  return false;
}

}  // namespace

int main() {
  bool all = true;
  for (const auto& c : lab::run_acceptance(kSeed)) {
    line(c.passed, c.id, c.title, c.seconds, c.passed ? std::string() : c.detail);
    all = all && c.passed;
  }

  lab::Stopwatch clock;
  const fs::path root = fs::temp_directory_path() / ("laguerre-riesz-determinism-" + std::to_string(::getpid()));
  std::string first;
  std::string second;
  std::string why;
  bool same = cli_verify(root / "a", first, why) && cli_verify(root / "b", second, why);
  if (same && first != second) {
    same = false;
    why = "samples.csv differs between runs";
  }
  if (same && first.find('\n') == first.size() - 1) {
    same = false;
    why = "samples.csv has no data rows";
  }
  line(same, 11, "determinism of verify samples.csv", clock.seconds(), why);
  all = all && same;
  fs::remove_all(root);
  return all ? 0 : 1;
}
