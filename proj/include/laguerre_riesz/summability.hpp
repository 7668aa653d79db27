#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "parallel.hpp"
#include "special_fn.hpp"

namespace laguerre_riesz {

struct MultiplierSpec {
  std::function<double(double)> fn;  // eigenvalue -> factor
  std::string tag;
};

inline SpectralCoefficients apply_multiplier(const SpectralCoefficients& coeffs, const MultiplierSpec& m) {
  SpectralCoefficients out = coeffs;
  out.residual.reset();
  std::vector<double> factors(coeffs.max_degree() + 1);
  for (int n = 0; n <= coeffs.max_degree(); ++n) {
    factors[n] = m.fn(eigenvalue(n, coeffs.alpha()));
    if (!std::isfinite(factors[n])) {
      throw std::domain_error("apply_multiplier: multiplier '" + m.tag + "' is not finite at e_" + std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) out.value(i) *= factors[out.degree(i)];
  return out;
}

// CSV trace "e_n,m(e_n)" over the table's spectrum.
inline void write_multiplier_trace(std::ostream& os, const MultiplierSpec& m, const AlphaVector& alpha, int N) {
  os << "e_n,m(e_n)\n";
  for (int n = 0; n <= N; ++n) {
    const double e = eigenvalue(n, alpha);
    os << detail::format_g17(e) << ',' << detail::format_g17(m.fn(e)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Riesz and Cesaro means.

struct RieszParams {
  double lambda = 0.0;
  double R = 1.0;
};

// (1 - e/R^2)_+^lambda with the convention 0^0 = 0 outside the open region.
inline double riesz_factor(double e, double lambda, double R) {
  const double s = 1.0 - e / (R * R);
  if (s <= 0.0) return 0.0;
  return lambda == 0.0 ? 1.0 : std::pow(s, lambda);
}

inline MultiplierSpec riesz_multiplier(const RieszParams& p) {
  detail::require(p.lambda >= 0.0, "riesz: lambda must be >= 0");
  detail::require(p.R > 0.0, "riesz: R must be positive");
  return {[p](double e) { return riesz_factor(e, p.lambda, p.R); }, "riesz"};
}

inline SpectralCoefficients riesz_mean(const SpectralCoefficients& coeffs, const RieszParams& p) {
  return apply_multiplier(coeffs, riesz_multiplier(p));
}

// A_{K-n}(lambda) / A_K(lambda) for n = 0..n_max with A_k = Gamma(k+lambda+1)/(Gamma(k+1)Gamma(lambda+1)).
inline std::vector<double> cesaro_weights(long K, double lambda, int n_max) {
  detail::require(lambda >= 0.0, "cesaro: lambda must be >= 0");
  detail::require(K >= 0 && n_max >= 0, "cesaro: K and n_max must be non-negative");
  std::vector<double> w(n_max + 1, 0.0);
  auto log_a = [lambda](long double k) {
    return std::lgamma(k + lambda + 1.0L) - std::lgamma(k + 1.0L);
  };
  const long double top = log_a(static_cast<long double>(K));
  for (int n = 0; n <= n_max && n <= K; ++n) {
    w[n] = static_cast<double>(std::exp(log_a(static_cast<long double>(K - n)) - top));
  }
  return w;
}

inline SpectralCoefficients cesaro_mean(const SpectralCoefficients& coeffs, double lambda, double R) {
  detail::require(R > 0.0, "cesaro: R must be positive");
  const long K = static_cast<long>(std::floor(R * R));
  const auto w = cesaro_weights(K, lambda, coeffs.max_degree());
  SpectralCoefficients out = coeffs;
  out.residual.reset();
  for (std::size_t i = 0; i < out.size(); ++i) out.value(i) *= w[out.degree(i)];
  return out;
}

// ---------------------------------------------------------------------------
// Maximal Riesz operator on a finite R-grid.

struct GeometricGrid {
  double lo = 1.0;
  double hi = 2.0;
  double ratio = 1.1;

  std::vector<double> points() const {
    detail::require(lo > 0.0 && hi >= lo && ratio > 1.0, "GeometricGrid: need 0 < lo <= hi and ratio > 1");
    std::vector<double> out;
    for (double r = lo; r < hi * (1.0 + 1e-12); r *= ratio) out.push_back(r);
    if (out.back() < hi) out.push_back(hi);
    return out;
  }

  GeometricGrid refined() const { return {lo, hi, std::sqrt(ratio)}; }
};

// Ratio 1 + 1/(4N) from sqrt(e_0) to sqrt(e_N)(1 + margin).
inline GeometricGrid default_riesz_grid(const AlphaVector& alpha, int N, double margin = 0.25) {
  return {std::sqrt(eigenvalue(0, alpha)), std::sqrt(eigenvalue(N, alpha)) * (1.0 + margin),
          1.0 + 1.0 / (4.0 * std::max(N, 1))};
}

struct MaximalRieszResult {
  std::vector<double> values;  // one per x
  std::size_t grid_points = 0;
  bool covers_spectrum = true;
  std::string warning;
};

inline MaximalRieszResult maximal_riesz(const SpectralCoefficients& coeffs, double lambda, const GeometricGrid& grid,
                                        const std::vector<std::vector<double>>& xs) {
  detail::require(lambda >= 0.0, "maximal_riesz: lambda must be >= 0");
  const auto Rs = grid.points();
  MaximalRieszResult out;
  out.grid_points = Rs.size();
  const int N = coeffs.max_degree();
  const double e0 = eigenvalue(0, coeffs.alpha());
  const double eN = eigenvalue(N, coeffs.alpha());
  if (Rs.front() > std::sqrt(e0) * (1.0 + 1e-12) || Rs.back() * Rs.back() <= eN) {
    out.covers_spectrum = false;
    out.warning = "R grid does not cover [sqrt(e_0), sqrt(e_N)]";
  }
  out.values.assign(xs.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto comps = degree_components(coeffs, xs[i]);
    double best = 0.0;
    for (double R : Rs) {
      double s = 0.0;
      for (int n = 0; n <= N; ++n) {
        const double m = riesz_factor(eigenvalue(n, coeffs.alpha()), lambda, R);
        if (m == 0.0) break;
        s += m * comps[n];
      }
      best = std::max(best, std::fabs(s));
    }
    out.values[i] = best;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Critical index.

struct CriticalIndex {
  double lambda = 0.0;           // max{2(|alpha|+d)|1/2 - 1/p| - 1/2, 0}
  double ae_threshold = 0.0;     // lambda / 2
  double sharpness_p = 0.0;      // (4|alpha|+4d)/(2|alpha|+2d-1), +inf when 2|alpha|+2d <= 1
  bool sharpness_applies = false;
};

inline CriticalIndex critical_index(const AlphaVector& alpha, double p) {
  detail::require(p >= 2.0, "critical_index: p must be >= 2");
  const double h = alpha.l1() + static_cast<double>(alpha.dim());
  CriticalIndex c;
  c.lambda = std::max(2.0 * h * std::fabs(0.5 - 1.0 / p) - 0.5, 0.0);
  c.ae_threshold = 0.5 * c.lambda;
  c.sharpness_p = (2.0 * h > 1.0) ? 4.0 * h / (2.0 * h - 1.0) : std::numeric_limits<double>::infinity();
  c.sharpness_applies = 2.0 * h > 1.0 && p > c.sharpness_p;
  return c;
}

// ---------------------------------------------------------------------------
// Square function.

struct BumpFunction {
  std::function<double(double)> fn;
  std::string tag;
  double support_lo = 0.125;
  double support_hi = 0.5;
};

// exp(1 - 1/(1 - s^2)) with s mapping [1/8, 1/2] onto [-1, 1]; peak value 1.
inline BumpFunction default_bump() {
  return {[](double sigma) {
            const double s = (sigma - 0.3125) / 0.1875;
            if (std::fabs(s) >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - s * s));
          },
          "cinf_bump", 0.125, 0.5};
}

// Log-spaced t-grid: points t_k with uniform spacing h in log t.
struct LogGrid {
  double t_lo = 1.0;
  double t_hi = 2.0;
  std::size_t points = 2;

  double step() const { return std::log(t_hi / t_lo) / static_cast<double>(points - 1); }
  double at(std::size_t k) const { return t_lo * std::exp(step() * static_cast<double>(k)); }
};

// Width in log t of the window where phi(delta^{-1}(1 - e/t^2)) can be nonzero.
inline double bump_window_log_width(double delta, const BumpFunction& phi) {
  return 0.5 * std::log((1.0 - delta * phi.support_lo) / (1.0 - delta * phi.support_hi));
}

// Grid covering every active window of degrees 0..N, with `per_window`
// points across each window.
inline LogGrid default_t_grid(const AlphaVector& alpha, int N, double delta, const BumpFunction& phi,
                              int per_window = 32) {
  const double lo = std::sqrt(eigenvalue(0, alpha) / (1.0 - delta * phi.support_lo));
  const double hi = std::sqrt(eigenvalue(N, alpha) / (1.0 - delta * phi.support_hi));
  const double t_lo = lo * std::exp(-0.05 * bump_window_log_width(delta, phi));
  const double t_hi = hi * std::exp(0.05 * bump_window_log_width(delta, phi));
  const double h = bump_window_log_width(delta, phi) / per_window;
  const auto n = static_cast<std::size_t>(std::ceil(std::log(t_hi / t_lo) / h)) + 1;
  return {t_lo, t_hi, std::max<std::size_t>(n, 2)};
}

inline void check_square_function_grid(double delta, const BumpFunction& phi, const LogGrid& grid) {
  detail::require(delta > 0.0 && delta < 0.5, "square_function: delta must lie in (0, 1/2)");
  detail::require(grid.points >= 2 && grid.t_hi > grid.t_lo && grid.t_lo > 0.0, "square_function: malformed t grid");
  if (bump_window_log_width(delta, phi) / grid.step() < 8.0) {
    throw std::invalid_argument("square_function: t grid has fewer than 8 points across a multiplier window");
  }
}

// Multiplier values m_t(e_n) = phi(delta^{-1}(1 - e_n/t^2)) for n = 0..N.
inline std::vector<double> square_function_factors(const AlphaVector& alpha, int N, double delta,
                                                   const BumpFunction& phi, double t) {
  std::vector<double> m(N + 1);
  for (int n = 0; n <= N; ++n) m[n] = phi.fn((1.0 - eigenvalue(n, alpha) / (t * t)) / delta);
  return m;
}

inline double square_function(const SpectralCoefficients& coeffs, double delta, const BumpFunction& phi,
                              std::span<const double> x, const LogGrid& grid) {
  check_square_function_grid(delta, phi, grid);
  const auto comps = degree_components(coeffs, x);
  const int N = coeffs.max_degree();
  const double h = grid.step();
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.points; ++k) {
    const auto m = square_function_factors(coeffs.alpha(), N, delta, phi, grid.at(k));
    double v = 0.0;
    for (int n = 0; n <= N; ++n) v += m[n] * comps[n];
    const double w = (k == 0 || k + 1 == grid.points) ? 0.5 * h : h;
    sum += w * v * v;
  }
  return std::sqrt(sum);
}

// int_0^inf phi(delta^{-1}(1 - e/t^2))^2 dt/t, which does not depend on e.
// Computed in the variable sigma = 1 - e/t^2, where dt/t = d sigma / (2(1 - sigma)).
inline double bump_energy(double delta, const BumpFunction& phi, int points = 400) {
  const GaussRule rule = composite_gauss_legendre(delta * phi.support_lo, delta * phi.support_hi,
                                                  delta * (phi.support_hi - phi.support_lo) / 20.0, points / 20);
  return rule.integrate([&](double s) {
    const double v = phi.fn(s / delta);
    return v * v / (2.0 * (1.0 - s));
  });
}

// ---------------------------------------------------------------------------
// Discretized N^2,q norm.

struct DiscretizedNorm {
  double value = 0.0;
  int samples_per_cell = 0;  // the value is a lower estimate at this density
};

template <class F>
DiscretizedNorm discretized_norm(F&& F_fn, int N, double q, int samples_per_cell = 64) {
  detail::require(N >= 1, "discretized_norm: N must be positive");
  detail::require(q >= 2.0, "discretized_norm: q must be >= 2");
  detail::require(samples_per_cell >= 1, "discretized_norm: need at least one sample per cell");
  const long cells = static_cast<long>(N) * N;
  double sum = 0.0;
  for (long i = 0; i < cells; ++i) {
    double sup = 0.0;
    // Samples include both cell ends, so continuous F reach their closed-cell max.
    for (int k = 0; k < samples_per_cell; ++k) {
      const double frac = samples_per_cell > 1 ? static_cast<double>(k) / (samples_per_cell - 1) : 0.0;
      const double x = (static_cast<double>(i) + frac) / static_cast<double>(cells);
      sup = std::max(sup, std::fabs(F_fn(x)));
    }
    sum += std::pow(sup, q);
  }
  return {std::pow(sum / static_cast<double>(cells), 1.0 / q), samples_per_cell};
}

}  // namespace laguerre_riesz
