#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "../quadrature.hpp"
#include "../special_fn.hpp"
#include "config.hpp"
#include "radial.hpp"
#include "report.hpp"

namespace laguerre_riesz::lab::internal {

inline ExperimentReport start_report(const std::string& name, std::uint64_t seed) {
  ExperimentReport r;
  r.name = name;
  r.seed = seed;
  return r;
}

inline void record(ExperimentReport& r, const std::string& key, double v) { r.params[key] = detail::format_g17(v); }

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + detail::format_g17(v[i]);
  return s;
}

inline std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string join(const AlphaVector& a) { return join(std::vector<double>(a.entries().begin(), a.entries().end())); }

inline double scalar_alpha(const Config& cfg, double fallback) {
  const AlphaVector a = cfg.get_alpha("alpha", AlphaVector{fallback});
  detail::require(a.dim() == 1, "this experiment runs in dimension one; give a single alpha");
  return a[0];
}

inline std::vector<int> degree_list(const Config& cfg, int lo, int hi, int per_octave) {
  auto ns = cfg.has("n_list") ? cfg.get_int_list("n_list", {}) : geometric_degrees(lo, hi, per_octave);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) detail::require(n >= 1, "n_list entries must be positive");
  return ns;
}

inline double decades(const std::vector<int>& ns) {
  return std::log10(static_cast<double>(ns.back()) / static_cast<double>(ns.front()));
}

inline GaussRule concat(const GaussRule& a, const GaussRule& b) {
  GaussRule r = a;
  r.nodes.insert(r.nodes.end(), b.nodes.begin(), b.nodes.end());
  r.weights.insert(r.weights.end(), b.weights.begin(), b.weights.end());
  return r;
}

// Weighted sum of f^2 over nodes [begin, end).
inline double mass(const std::vector<double>& f, const std::vector<double>& m, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t i = begin; i < end; ++i) s += m[i] * f[i] * f[i];
  return s;
}

}  // namespace laguerre_riesz::lab::internal
