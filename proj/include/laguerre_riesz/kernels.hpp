#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <vector>

#include "errors.hpp"
#include "expansion.hpp"
#include "measure.hpp"
#include "special_fn.hpp"

namespace laguerre_riesz {

struct HeatParams {
  double t = 1.0;
  AlphaVector alpha{0.0};
};

namespace detail {
inline void check_heat(const HeatParams& p) {
  require_domain(std::isfinite(p.t) && p.t > 0.0, "heat kernel: t must be positive");
}
}  // namespace detail

// log K(t, x, y) from the closed form. With s = sinh(2t):
//   K = s^{-d} exp(-coth(2t)(|x|^2+|y|^2)/2) prod_i I_{a_i}(x_i y_i / s) / (x_i y_i)^{a_i},
// and I_a(z)/(xy)^a is written as Ired_a(z) (2s)^{-a} so x_i y_i = 0 is harmless.
inline double log_heat_kernel_closed(const HeatParams& p, std::span<const double> x, std::span<const double> y) {
  detail::check_heat(p);
  detail::check_point(p.alpha, x);
  detail::check_point(p.alpha, y);
  const double s = std::sinh(2.0 * p.t);
  const double coth = 1.0 / std::tanh(2.0 * p.t);
  const double log_s = std::log(s);
  double r2 = 0.0;
  double out = -static_cast<double>(p.alpha.dim()) * log_s;
  for (std::size_t i = 0; i < x.size(); ++i) {
    r2 += x[i] * x[i] + y[i] * y[i];
    const double a = p.alpha[i];
    out += log_bessel_i_reduced(a, x[i] * y[i] / s) - a * (std::numbers::ln2 + log_s);
  }
  return out - 0.5 * coth * r2;
}

inline double heat_kernel_closed(const HeatParams& p, std::span<const double> x, std::span<const double> y) {
  return std::exp(log_heat_kernel_closed(p, x, y));
}

// Truncation degree N with e^{-4tN} times a crude growth factor below tol.
inline int heat_series_degree(const HeatParams& p, double tol = 1e-14, int cap = 4000) {
  detail::check_heat(p);
  double growth = static_cast<double>(p.alpha.dim()) - 1.0;
  for (double a : p.alpha.entries()) growth += std::max(a, 0.0);
  const double log_tol = std::log(tol) - static_cast<double>(p.alpha.dim()) * std::log(4.0);
  for (int N = 1; N < cap; ++N) {
    if (-4.0 * p.t * N + growth * std::log(N + 1.0) < log_tol) return N;
  }
  return cap;
}

inline double heat_kernel_series(const HeatParams& p, std::span<const double> x, std::span<const double> y, int N) {
  detail::check_heat(p);
  detail::require(N >= 0, "heat_kernel_series: N must be non-negative");
  const auto kernels = projection_kernels(N, p.alpha, x, y);
  double s = 0.0;
  for (int n = N; n >= 0; --n) s += std::exp(-p.t * eigenvalue(n, p.alpha)) * kernels[n];
  return s;
}

// ---------------------------------------------------------------------------

struct MehlerCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double tail_estimate = 0.0;
};

// lhs = sum_{k<=N} (k!/Gamma(k+a+1)) L_k^a(x) L_k^a(y) z^k,
// rhs = (1-z)^{-a-1} e^{-z(x+y)/(1-z)} Ired_a(2 sqrt(xyz)/(1-z)).
inline MehlerCheck mehler_identity_check(double a, double z, double x, double y, int N) {
  detail::require_domain(a > -1.0, "mehler_identity_check: a must be > -1");
  detail::require_domain(z > 0.0 && z < 1.0, "mehler_identity_check: z must lie in (0, 1)");
  detail::require_domain(x >= 0.0 && y >= 0.0, "mehler_identity_check: x, y must be >= 0");
  detail::require(N >= 0, "mehler_identity_check: N must be non-negative");
  const auto hx = laguerre_function_table(N, a, x);
  const auto hy = laguerre_function_table(N, a, y);
  const double scale = std::exp(0.5 * (x + y));
  MehlerCheck out;
  double zk = 1.0;
  double last = 0.0;
  for (int k = 0; k <= N; ++k) {
    last = hx[k] * hy[k] * scale * zk;
    out.lhs += last;
    zk *= z;
  }
  out.tail_estimate = std::fabs(last) * z / (1.0 - z);
  const double w = 2.0 * std::sqrt(x * y * z) / (1.0 - z);
  out.rhs = std::exp(-(a + 1.0) * std::log1p(-z) - z * (x + y) / (1.0 - z) + log_bessel_i_reduced(a, w));
  return out;
}

// ---------------------------------------------------------------------------
// Gaussian upper bound diagnostic.

struct GaussianProbeRow {
  double t = 0.0;
  double c = 0.0;
  double measured_C = 0.0;
  int grid_level = 0;
};

struct GaussianProbeReport {
  std::vector<GaussianProbeRow> rows;
  bool stable = false;  // last two levels within a factor 2

  void write_csv(std::ostream& os) const {
    os << "t,c,measured_C,grid_level\n";
    for (const auto& r : rows) {
      os << detail::format_g17(r.t) << ',' << detail::format_g17(r.c) << ',' << detail::format_g17(r.measured_C) << ','
         << r.grid_level << '\n';
    }
  }
};

// Points on a uniform axis grid in [lo, hi] (per coordinate, tensorized).
struct PointPairGrid {
  double lo = 0.1;
  double hi = 3.0;
  int points_per_axis = 9;

  PointPairGrid refined() const { return {lo, hi, 2 * points_per_axis - 1}; }

  std::vector<std::vector<double>> points(std::size_t d) const {
    std::vector<double> axis(points_per_axis);
    for (int i = 0; i < points_per_axis; ++i) axis[i] = lo + (hi - lo) * i / (points_per_axis - 1.0);
    std::vector<std::vector<double>> out{{}};
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<std::vector<double>> next;
      for (const auto& p : out) {
        for (double v : axis) {
          auto q = p;
          q.push_back(v);
          next.push_back(std::move(q));
        }
      }
      out = std::move(next);
    }
    return out;
  }
};

// max over pairs of K(t,x,y) e^{dt} mu(Q(x, sqrt t)) exp(c|x-y|^2/t).
inline double gaussian_bound_value(const HeatParams& p, const std::vector<std::vector<double>>& pts, double c) {
  const double d = static_cast<double>(p.alpha.dim());
  const double rt = std::sqrt(p.t);
  double best = 0.0;
  for (const auto& x : pts) {
    const double log_q = std::log(cube_measure(x, rt, p.alpha));
    for (const auto& y : pts) {
      double r2 = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) r2 += (x[j] - y[j]) * (x[j] - y[j]);
      const double v = log_heat_kernel_closed(p, x, y) + d * p.t + log_q + c * r2 / p.t;
      best = std::max(best, std::exp(v));
    }
  }
  return best;
}

inline GaussianProbeReport gaussian_bound_probe(const HeatParams& p, const PointPairGrid& grid, double c = 0.125,
                                                int levels = 2) {
  detail::require(c > 0.0, "gaussian_bound_probe: c must be positive");
  detail::require(levels >= 1, "gaussian_bound_probe: need at least one level");
  GaussianProbeReport rep;
  PointPairGrid g = grid;
  for (int level = 0; level < levels; ++level) {
    rep.rows.push_back({p.t, c, gaussian_bound_value(p, g.points(p.alpha.dim()), c), level});
    g = g.refined();
  }
  if (rep.rows.size() >= 2) {
    const double a = rep.rows[rep.rows.size() - 2].measured_C;
    const double b = rep.rows.back().measured_C;
    rep.stable = std::isfinite(a) && std::isfinite(b) && b <= 2.0 * a && a <= 2.0 * b;
  } else {
    rep.stable = std::isfinite(rep.rows.back().measured_C);
  }
  return rep;
}

}  // namespace laguerre_riesz
