#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../expansion.hpp"
#include "fitting.hpp"

namespace laguerre_riesz::lab {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Sample {
  std::string series;  // curve label within one report
  double abscissa = 0.0;
  double value = 0.0;
  bool in_fit = false;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  std::string tag;  // distinguishes several runs of one experiment in a suite
  std::map<std::string, std::string> params;
  std::vector<Sample> samples;
  double fitted_slope = std::numeric_limits<double>::quiet_NaN();
  double slope_stderr = std::numeric_limits<double>::quiet_NaN();
  double expected_slope = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::inconclusive;
  double runtime_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool slope_experiment = true;

  void add(const std::string& series, double x, double y, bool in_fit = false) {
    samples.push_back({series, x, y, in_fit});
  }
  void check(const std::string& what, bool ok, const std::string& detail = {}) { checks.push_back({what, ok, detail}); }
  bool checks_passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

// Fits the in_fit samples and sets the verdict from the slope rule.
inline void finalize_slope(ExperimentReport& r, double expected, double tolerance) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& s : r.samples) {
    if (s.in_fit) {
      x.push_back(s.abscissa);
      y.push_back(s.value);
    }
  }
  r.expected_slope = expected;
  r.tolerance = tolerance;
  r.slope_experiment = true;
  if (r.samples.empty()) throw std::logic_error("report '" + r.name + "' has no samples");
  const SlopeFit fit = fit_loglog(x, y, r.seed, r.name);
  r.fitted_slope = fit.slope;
  r.slope_stderr = fit.stderr_bootstrap;
  r.params["fit_points"] = std::to_string(fit.points);
  r.params["fit_decades"] = detail::format_g17(fit.decades);
  if (!conclusive(fit)) {
    r.verdict = Verdict::inconclusive;
    r.notes.push_back("fewer than 6 points or under 1.2 decades; no verdict");
    return;
  }
  r.verdict = std::fabs(fit.slope - expected) <= tolerance ? Verdict::pass : Verdict::fail;
}

// Verdict of an experiment that asserts checks instead of a slope.
inline void finalize_checks(ExperimentReport& r) {
  r.slope_experiment = false;
  if (r.samples.empty()) throw std::logic_error("report '" + r.name + "' has no samples");
  r.verdict = r.checks_passed() ? Verdict::pass : Verdict::fail;
}

namespace internal {
inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }
}  // namespace internal

inline nlohmann::json to_json(const ExperimentReport& r, bool with_runtime = true) {
  nlohmann::json j;
  j["name"] = r.name;
  j["tag"] = r.tag;
  j["params"] = r.params;
  j["fitted_slope"] = internal::number_or_null(r.fitted_slope);
  j["slope_stderr"] = internal::number_or_null(r.slope_stderr);
  j["expected_slope"] = internal::number_or_null(r.expected_slope);
  j["tolerance"] = internal::number_or_null(r.tolerance);
  j["verdict"] = to_string(r.verdict);
  if (with_runtime) j["runtime_seconds"] = r.runtime_seconds;
  j["seed"] = r.seed;
  j["slope_experiment"] = r.slope_experiment;
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["notes"] = r.notes;
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"series", s.series}, {"abscissa", internal::number_or_null(s.abscissa)},
                       {"value", internal::number_or_null(s.value)}, {"in_fit", s.in_fit}});
  }
  return j;
}

inline void write_samples_header(std::ostream& os) { os << "experiment,tag,series,abscissa,value,in_fit\n"; }

// No timing columns, so identical inputs give identical bytes.
inline void write_samples(std::ostream& os, const ExperimentReport& r) {
  for (const auto& s : r.samples) {
    os << r.name << ',' << r.tag << ',' << s.series << ',' << detail::format_g17(s.abscissa) << ','
       << detail::format_g17(s.value) << ',' << (s.in_fit ? 1 : 0) << '\n';
  }
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace laguerre_riesz::lab
