#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "../errors.hpp"
#include "../parallel.hpp"
#include "../quadrature.hpp"
#include "../special_fn.hpp"

namespace laguerre_riesz::lab {

// Radius past which phi_n^A(r)^q is below e^{-60} relative to its bulk size.
// Beyond the turning point sqrt(nu) the decay exponent grows like
// (2/3) (2 sqrt(nu))^{1/2} s^{3/2} at distance s.
inline double radial_cutoff(int n, double A, double q = 2.0) {
  const double nu = 4.0 * n + 2.0 * A + 2.0;
  const double s = std::pow(60.0 / (q * std::sqrt(2.0 * std::sqrt(nu))), 2.0 / 3.0);
  return std::sqrt(nu) + s + 1.0;
}

// Panel width resolving the local wavelength 2 pi / sqrt(nu).
inline double radial_panel(int n, double A) {
  const double nu = 4.0 * n + 2.0 * A + 2.0;
  return std::min(0.25, 1.5 / std::sqrt(nu));
}

inline GaussRule radial_rule(double lo, double hi, int n_max, double A, int points_per_panel = 16) {
  return composite_gauss_legendre(lo, hi, std::min(radial_panel(n_max, A), (hi - lo) / 4.0), points_per_panel);
}

// values[i][p] = phi_{ns[i]}^A(xs[p]); one recurrence sweep per point.
inline std::vector<std::vector<double>> phi_profiles(const std::vector<int>& ns, double A, std::span<const double> xs) {
  detail::require(!ns.empty(), "phi_profiles: empty degree list");
  const int n_max = *std::max_element(ns.begin(), ns.end());
  std::vector<std::vector<double>> out(ns.size(), std::vector<double>(xs.size()));
  // slot[k] = index into ns + 1, or 0 when degree k is not requested.
  std::vector<std::size_t> slot(n_max + 1, 0);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    detail::require(ns[i] >= 0, "phi_profiles: degrees must be non-negative");
    slot[ns[i]] = i + 1;
  }
  parallel_for(xs.size(), [&](std::size_t p) {
    detail::laguerre_sweep(n_max, A, xs[p] * xs[p], [&](int k, detail::ScaledValue h, detail::ScaledValue) {
      if (const std::size_t s = slot[k]) out[s - 1][p] = std::numbers::sqrt2 * h.value();
    });
  });
  // Repeated degrees share one slot; copy to the others.
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const std::size_t s = slot[ns[i]] - 1;
    if (s != i) out[i] = out[s];
  }
  return out;
}

// Weights of the measure r^{2A+1} dr times an optional profile w(r) on the rule.
template <class W>
std::vector<double> radial_measure(const GaussRule& rule, double A, W&& w) {
  std::vector<double> m(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double r = rule.nodes[i];
    m[i] = rule.weights[i] * std::pow(r, 2.0 * A + 1.0) * w(r);
  }
  return m;
}

inline double lq_integral(std::span<const double> f, std::span<const double> measure, double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += measure[i] * std::pow(std::fabs(f[i]), q);
  return s;
}

// ---------------------------------------------------------------------------
// Weak-L^2 quasi-norm sup_delta delta * m({|f| > delta})^{1/2}.

struct WeakNorm {
  double value = 0.0;        // ladder estimate
  double best_delta = 0.0;   // rung attaining it
  double refined = 0.0;      // ladder with twice the rungs
  double exact_sup = 0.0;    // sup over the sample values themselves
};

namespace internal {
// delta_k = top * ratio^k, k = 0..rungs-1, ratio chosen so the ladder spans `span` decades.
inline std::pair<double, double> ladder_sup(std::span<const double> sorted_abs, std::span<const double> cum_mass,
                                            double top, int rungs, double span) {
  const double ratio = std::pow(10.0, -span / (rungs - 1));
  double best = 0.0;
  double best_delta = top;
  double delta = top;
  for (int k = 0; k < rungs; ++k, delta *= ratio) {
    // Mass of {|f| > delta}: prefix of the descending order.
    const auto it = std::upper_bound(sorted_abs.begin(), sorted_abs.end(), delta, std::greater<double>());
    const auto count = static_cast<std::size_t>(it - sorted_abs.begin());
    const double mass = count ? cum_mass[count - 1] : 0.0;
    const double v = delta * std::sqrt(mass);
    if (v > best) {
      best = v;
      best_delta = delta;
    }
  }
  return {best, best_delta};
}
}  // namespace internal

// f sampled on quadrature nodes with measure weights; the distribution
// function is the weighted count. The ladder is anchored at max|f| and spans
// `span_decades` decades below it.
inline WeakNorm weak_l2_norm(std::span<const double> f, std::span<const double> measure, int rungs = 32,
                             double span_decades = 2.0) {
  detail::require(f.size() == measure.size() && !f.empty(), "weak_l2_norm: need paired, non-empty samples");
  detail::require(rungs >= 2, "weak_l2_norm: need at least two rungs");
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::fabs(f[a]) > std::fabs(f[b]); });
  std::vector<double> sorted_abs(f.size());
  std::vector<double> cum(f.size());
  double acc = 0.0;
  WeakNorm out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_abs[i] = std::fabs(f[order[i]]);
    acc += measure[order[i]];
    cum[i] = acc;
    out.exact_sup = std::max(out.exact_sup, sorted_abs[i] * std::sqrt(acc));
  }
  const double top = sorted_abs.front();
  if (!(top > 0.0)) return out;
  std::tie(out.value, out.best_delta) = internal::ladder_sup(sorted_abs, cum, top, rungs, span_decades);
  out.refined = internal::ladder_sup(sorted_abs, cum, top, 2 * rungs - 1, span_decades).first;
  return out;
}

// Geometric integer ladder from lo to hi with `per_octave` points per doubling.
inline std::vector<int> geometric_degrees(int lo, int hi, int per_octave) {
  detail::require(lo >= 1 && hi >= lo && per_octave >= 1, "geometric_degrees: need 1 <= lo <= hi");
  std::vector<int> out;
  const int steps = static_cast<int>(std::lround(per_octave * std::log2(static_cast<double>(hi) / lo)));
  for (int k = 0; k <= steps; ++k) {
    const int n = static_cast<int>(std::lround(lo * std::pow(2.0, static_cast<double>(k) / per_octave)));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

}  // namespace laguerre_riesz::lab
