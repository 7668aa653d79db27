#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace laguerre_riesz {

// Type parameter alpha in (-1, inf)^d.
class AlphaVector {
 public:
  AlphaVector(std::initializer_list<double> entries) : AlphaVector(std::vector<double>(entries)) {}

  explicit AlphaVector(std::vector<double> entries) : entries_(std::move(entries)) {
    detail::require(!entries_.empty(), "AlphaVector: dimension must be at least 1");
    for (double a : entries_) {
      detail::require_domain(std::isfinite(a) && a > -1.0, "AlphaVector: entries must be finite and > -1");
    }
  }

  std::size_t dim() const noexcept { return entries_.size(); }
  double operator[](std::size_t j) const { return entries_[j]; }
  std::span<const double> entries() const noexcept { return entries_; }
  double l1() const noexcept { return std::accumulate(entries_.begin(), entries_.end(), 0.0); }

  // Type of the one-dimensional problem that radial functions reduce to.
  double radial_type() const noexcept { return l1() + static_cast<double>(dim()) - 1.0; }

  // Exponent in mu(B(x, lR)) ~ l^{2|alpha|+2d}.
  double homogeneous_dimension() const noexcept { return 2.0 * (l1() + static_cast<double>(dim())); }

  bool operator==(const AlphaVector&) const = default;

 private:
  std::vector<double> entries_;
};

struct MultiIndex {
  std::vector<int> entries;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> e) : MultiIndex(std::vector<int>(e)) {}
  explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {
    for (int k : entries) detail::require(k >= 0, "MultiIndex: entries must be non-negative");
  }

  std::size_t size() const noexcept { return entries.size(); }
  int operator[](std::size_t j) const { return entries[j]; }
  int degree() const noexcept { return std::accumulate(entries.begin(), entries.end(), 0); }

  auto operator<=>(const MultiIndex&) const = default;
};

inline double eigenvalue(int n, const AlphaVector& alpha) {
  detail::require(n >= 0, "eigenvalue: n must be non-negative");
  return 4.0 * n + 2.0 * alpha.l1() + 2.0 * static_cast<double>(alpha.dim());
}

namespace detail {

inline void check_order_and_type(int n, double a) {
  require(n >= 0, "degree must be non-negative");
  require_domain(std::isfinite(a) && a > -1.0, "type parameter must be finite and > -1");
}

// Value represented as mantissa * exp(log_scale); keeps large-argument
// Laguerre functions from underflowing before the recurrence has grown.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const {
    if (mantissa == 0.0) return 0.0;
    return std::copysign(std::exp(log_scale + std::log(std::fabs(mantissa))), mantissa);
  }
  double log_abs() const {
    return mantissa == 0.0 ? -std::numeric_limits<double>::infinity()
                           : log_scale + std::log(std::fabs(mantissa));
  }
};

inline constexpr double kRescaleThreshold = 1e150;
inline const double kLogRescale = std::log(kRescaleThreshold);

// Runs the orthonormal recurrence for h_k(u) = psi_k(u) e^{-u/2}, where
// psi_k are the orthonormal polynomials for u^a e^{-u} du, and calls
// sink(k, h_k, h_{k-1}) as ScaledValues sharing one scale.
template <class Sink>
void laguerre_sweep(int n, double a, double u, Sink&& sink) {
  double log_scale = -0.5 * u - 0.5 * std::lgamma(a + 1.0);
  double prev = 0.0;
  double cur = 1.0;
  sink(0, ScaledValue{cur, log_scale}, ScaledValue{prev, log_scale});
  for (int k = 0; k < n; ++k) {
    const double kk = k;
    const double next =
        ((2.0 * kk + a + 1.0 - u) * cur - std::sqrt(kk * (kk + a)) * prev) / std::sqrt((kk + 1.0) * (kk + a + 1.0));
    prev = cur;
    cur = next;
    if (std::fabs(cur) > kRescaleThreshold) {
      cur /= kRescaleThreshold;
      prev /= kRescaleThreshold;
      log_scale += kLogRescale;
    }
    sink(k + 1, ScaledValue{cur, log_scale}, ScaledValue{prev, log_scale});
  }
}

inline ScaledValue laguerre_scaled(int n, double a, double u) {
  ScaledValue out;
  laguerre_sweep(n, a, u, [&](int k, ScaledValue h, ScaledValue) {
    if (k == n) out = h;
  });
  return out;
}

}  // namespace detail

// h_k(u) = psi_k(u) e^{-u/2} for k = 0..n. Entries may underflow to zero
// where the true value is below the double range.
inline std::vector<double> laguerre_function_table(int n, double a, double u) {
  detail::check_order_and_type(n, a);
  detail::require_domain(std::isfinite(u) && u >= 0.0, "laguerre_function_table: u must be finite and >= 0");
  std::vector<double> out(static_cast<std::size_t>(n) + 1);
  double cached_log = std::numeric_limits<double>::quiet_NaN();
  double factor = 0.0;
  detail::laguerre_sweep(n, a, u, [&](int k, detail::ScaledValue h, detail::ScaledValue) {
    if (h.log_scale != cached_log) {
      cached_log = h.log_scale;
      factor = std::exp(h.log_scale);
    }
    out[static_cast<std::size_t>(k)] = factor > 1e-280 ? h.mantissa * factor : h.value();
  });
  return out;
}

// Classical generalized Laguerre polynomial by the three-term recurrence in
// long double. Relative accuracy is ~1e-14 for n <= 64, x <= 50; beyond that
// the absolute error grows like eps * max_k |L_k(x)|.
inline double laguerre_poly(int n, double a, double x) {
  detail::check_order_and_type(n, a);
  detail::require_domain(std::isfinite(x), "laguerre_poly: x must be finite");
  long double prev = 1.0L;
  if (n == 0) return 1.0;
  const long double la = a;
  const long double lx = x;
  long double cur = la + 1.0L - lx;
  for (int k = 1; k < n; ++k) {
    const long double next = ((2.0L * k + la + 1.0L - lx) * cur - (k + la) * prev) / (k + 1.0L);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

// phi_n^a(x) = (2 n!/Gamma(n+a+1))^{1/2} L_n^a(x^2) e^{-x^2/2}.
inline double laguerre_fn_1d(int n, double a, double x) {
  detail::check_order_and_type(n, a);
  detail::require_domain(std::isfinite(x) && x >= 0.0, "laguerre_fn_1d: x must be finite and >= 0");
  return std::numbers::sqrt2 * detail::laguerre_scaled(n, a, x * x).value();
}

// Normalized Laguerre function (Gamma(n+1)/Gamma(n+a+1))^{1/2} e^{-u/2} u^{a/2} L_n^a(u),
// orthonormal in L^2((0,inf), du). At u = 0 with a < 0 the value is +inf.
inline double normalized_laguerre(int n, double a, double u) {
  detail::check_order_and_type(n, a);
  detail::require_domain(std::isfinite(u) && u >= 0.0, "normalized_laguerre: u must be finite and >= 0");
  const auto h = detail::laguerre_scaled(n, a, u);
  if (u == 0.0) {
    if (a < 0.0) return std::numeric_limits<double>::infinity();
    if (a > 0.0) return 0.0;
    return h.value();
  }
  if (h.mantissa == 0.0) return 0.0;
  return std::copysign(std::exp(h.log_abs() + 0.5 * a * std::log(u)), h.mantissa);
}

inline double laguerre_fn_d(const MultiIndex& mu, const AlphaVector& alpha, std::span<const double> x) {
  if (mu.size() != alpha.dim() || x.size() != alpha.dim()) {
    throw std::invalid_argument("laguerre_fn_d: dimension mismatch between multi-index, alpha and point");
  }
  double out = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) out *= laguerre_fn_1d(mu[j], alpha[j], x[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Modified Bessel function of the first kind.

namespace detail {

// log sum_k (z^2/4)^k / (k! Gamma(k+a+1)), i.e. log(I_a(z) / (z/2)^a).
inline double log_bessel_reduced_series(double a, double z) {
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  for (int k = 0; k < 100000; ++k) {
    term *= q / ((k + 1.0) * (k + a + 1.0));
    sum += term;
    if (sum > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      log_scale += 250.0 * std::numbers::ln10;
    }
    if (term < 1e-18 * sum && (k + 1.0) * (k + a + 1.0) > q) break;
  }
  return log_scale + std::log(sum) - std::lgamma(a + 1.0);
}

// Hankel expansion of log I_a(z); returns false if the terms do not reach
// double precision before they start growing.
inline bool log_bessel_asymptotic(double a, double z, double& out) {
  const double mu4 = 4.0 * a * a;
  double term = 1.0;
  double sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu4 - odd * odd) / (k * 8.0 * z);
    const double mag = std::fabs(term);
    if (mag > last) return false;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::fabs(sum)) {
      out = z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum);
      return true;
    }
  }
  return false;
}

inline void check_bessel_args(double a, double z) {
  require_domain(std::isfinite(a) && a > -1.0, "bessel_i: order must be finite and > -1");
  require_domain(std::isfinite(z) && z >= 0.0, "bessel_i: argument must be finite and >= 0");
}

}  // namespace detail

// log(I_a(z) / (z/2)^a); finite at z = 0 where it equals -lgamma(a+1).
inline double log_bessel_i_reduced(double a, double z) {
  detail::check_bessel_args(a, z);
  if (z == 0.0) return -std::lgamma(a + 1.0);
  if (z > std::max(25.0, 2.0 * (a + 2.0))) {
    double log_i = 0.0;
    if (detail::log_bessel_asymptotic(a, z, log_i)) return log_i - a * std::log(0.5 * z);
  }
  return detail::log_bessel_reduced_series(a, z);
}

inline double log_bessel_i(double a, double z) {
  detail::check_bessel_args(a, z);
  if (z == 0.0) {
    if (a == 0.0) return 0.0;
    return a > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  }
  return log_bessel_i_reduced(a, z) + a * std::log(0.5 * z);
}

inline double bessel_i(double a, double z) { return std::exp(log_bessel_i(a, z)); }

// I_a(z) / (z/2)^a, equal to 1/Gamma(a+1) at z = 0.
inline double bessel_i_reduced(double a, double z) { return std::exp(log_bessel_i_reduced(a, z)); }

// ---------------------------------------------------------------------------
// Four-regime envelope for the normalized Laguerre functions.

enum class RegimeTag { small, oscillatory_bulk, turning_point, exponential_tail };

inline const char* to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::small: return "small";
    case RegimeTag::oscillatory_bulk: return "oscillatory_bulk";
    case RegimeTag::turning_point: return "turning_point";
    case RegimeTag::exponential_tail: return "exponential_tail";
  }
  return "unknown";
}

struct AsymptoticRegime {
  RegimeTag tag = RegimeTag::small;
  double nu = 0.0;
  std::array<double, 3> boundaries{};  // 1/nu, nu/2, 3nu/2
};

struct Envelope {
  AsymptoticRegime regime;
  double bound = 0.0;
};

// Decay rate used in the exponential-tail envelope e^{-gamma u}.
inline constexpr double kDefaultTailRate = 1.0 / 16.0;

inline AsymptoticRegime classify_regime(int n, double a, double u) {
  detail::check_order_and_type(n, a);
  detail::require_domain(std::isfinite(u) && u >= 0.0, "classify_regime: u must be finite and >= 0");
  AsymptoticRegime r;
  r.nu = 4.0 * n + 2.0 * a + 2.0;
  r.boundaries = {1.0 / r.nu, 0.5 * r.nu, 1.5 * r.nu};
  if (u <= r.boundaries[0]) {
    r.tag = RegimeTag::small;
  } else if (u <= r.boundaries[1]) {
    r.tag = RegimeTag::oscillatory_bulk;
  } else if (u <= r.boundaries[2]) {
    r.tag = RegimeTag::turning_point;
  } else {
    r.tag = RegimeTag::exponential_tail;
  }
  return r;
}

inline Envelope asymptotic_envelope(int n, double a, double u, double tail_rate = kDefaultTailRate) {
  detail::require(tail_rate > 0.0, "asymptotic_envelope: tail rate must be positive");
  Envelope e{classify_regime(n, a, u), 0.0};
  const double nu = e.regime.nu;
  switch (e.regime.tag) {
    case RegimeTag::small: e.bound = std::pow(u * nu, 0.5 * a); break;
    case RegimeTag::oscillatory_bulk: e.bound = std::pow(u * nu, -0.25); break;
    case RegimeTag::turning_point:
      e.bound = std::pow(nu, -0.25) * std::pow(std::cbrt(nu) + std::fabs(nu - u), -0.25);
      break;
    case RegimeTag::exponential_tail: e.bound = std::exp(-tail_rate * u); break;
  }
  return e;
}

namespace detail {

inline void check_oscillatory_window(int n, double a, double u) {
  check_order_and_type(n, a);
  const double nu = 4.0 * n + 2.0 * a + 2.0;
  if (!(u >= 1.0 && u <= nu - std::cbrt(nu))) {
    throw std::domain_error("oscillatory_main_term: u must lie in [1, nu - nu^{1/3}]");
  }
}

}  // namespace detail

// Leading oscillatory term of the normalized Laguerre function in the bulk.
inline double oscillatory_main_term(int n, double a, double u) {
  detail::check_oscillatory_window(n, a, u);
  const double nu = 4.0 * n + 2.0 * a + 2.0;
  const double theta = std::acos(std::sqrt(u / nu));
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double phase = (nu * (2.0 * theta - std::sin(2.0 * theta)) - std::numbers::pi) / 4.0;
  return sign * std::sqrt(2.0 / std::numbers::pi) * std::pow(u, -0.25) * std::pow(nu - u, -0.25) * std::cos(phase);
}

// Size of the remainder after the oscillatory main term, up to a constant.
inline double oscillatory_remainder_envelope(int n, double a, double u) {
  detail::check_oscillatory_window(n, a, u);
  const double nu = 4.0 * n + 2.0 * a + 2.0;
  return std::pow(nu, 0.25) * std::pow(nu - u, -1.75) + std::pow(u * nu, -0.75);
}

struct EnvelopeFit {
  double max_ratio = 0.0;         // max |L_n^a(u)| / bound over the grid
  double log_ls_constant = 0.0;   // exp(mean log ratio), the log-domain least-squares constant
  std::size_t samples = 0;
};

// Samples each of the four regimes for every n and compares against the
// envelope. The grid is fixed so fitted constants are reproducible.
inline EnvelopeFit fit_envelope_constant(double a, std::span<const int> ns, double tail_rate = kDefaultTailRate,
                                         int points_per_regime = 64) {
  detail::require(points_per_regime >= 2, "fit_envelope_constant: need at least 2 points per regime");
  EnvelopeFit fit;
  double log_sum = 0.0;
  std::size_t log_count = 0;
  auto visit = [&](int n, double u) {
    const double value = std::fabs(normalized_laguerre(n, a, u));
    const double bound = asymptotic_envelope(n, a, u, tail_rate).bound;
    if (!(bound > 0.0) || !std::isfinite(value)) return;
    const double ratio = value / bound;
    fit.max_ratio = std::max(fit.max_ratio, ratio);
    ++fit.samples;
    if (ratio > 0.0) {
      log_sum += std::log(ratio);
      ++log_count;
    }
  };
  const int m = points_per_regime;
  for (int n : ns) {
    const double nu = 4.0 * n + 2.0 * a + 2.0;
    for (int i = 1; i <= m; ++i) {
      const double s = static_cast<double>(i) / m;
      visit(n, std::pow(10.0, -3.0 * (1.0 - s)) / nu);                 // (0, 1/nu]
      visit(n, (1.0 / nu) * std::pow(0.5 * nu * nu, s));               // geometric over the bulk
      visit(n, nu * (0.5 + s));                                        // turning region
      visit(n, nu * (1.5 + 2.5 * s));                                  // tail up to 4 nu
    }
  }
  fit.log_ls_constant = log_count ? std::exp(log_sum / static_cast<double>(log_count)) : 0.0;
  return fit;
}

}  // namespace laguerre_riesz
