#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "special_fn.hpp"

namespace laguerre_riesz {

// Plain node/weight pair list. Which measure the weights integrate against
// depends on the constructor that produced it.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre on [-1, 1], Newton iteration from Chebyshev-like guesses.
inline GaussRule gauss_legendre(int n) {
  detail::require(n >= 1, "gauss_legendre: need at least one node");
  if (n == 1) return GaussRule{{0.0}, {2.0}};
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

// Gauss rule on [lo, hi] for plain dx, built from copies of an n-point
// Gauss-Legendre rule on panels of width at most `panel_width`.
inline GaussRule composite_gauss_legendre(double lo, double hi, double panel_width, int points_per_panel = 16) {
  detail::require(hi > lo && panel_width > 0.0, "composite_gauss_legendre: need hi > lo and positive panel width");
  const GaussRule base = gauss_legendre(points_per_panel);
  const auto panels = static_cast<std::size_t>(std::ceil((hi - lo) / panel_width - 1e-12));
  const double h = (hi - lo) / static_cast<double>(panels);
  GaussRule r;
  r.nodes.reserve(panels * base.size());
  r.weights.reserve(panels * base.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = lo + h * static_cast<double>(p);
    for (std::size_t i = 0; i < base.size(); ++i) {
      r.nodes.push_back(a + 0.5 * h * (base.nodes[i] + 1.0));
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

// Gauss-Jacobi on [0, 1] for the weight s^a (1-s)^b ds (Golub-Welsch).
inline GaussRule gauss_jacobi_unit(int n, double a, double b) {
  detail::require(n >= 1, "gauss_jacobi_unit: need at least one node");
  detail::require_domain(a > -1.0 && b > -1.0, "gauss_jacobi_unit: exponents must be > -1");
  // Classical Jacobi on [-1, 1] with weight (1-t)^al (1+t)^be; s = (1+t)/2.
  const double al = b;
  const double be = a;
  const double ab = al + be;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + ab;
    if (k == 0) {
      diag(k) = (be - al) / (ab + 2.0);
    } else {
      diag(k) = (be * be - al * al) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    double v;
    if (k == 1) {
      v = 4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      v = 4.0 * k * (k + al) * (k + be) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off(k - 1) = std::sqrt(v);
  }
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mu0 = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  if (n == 1) {
    r.nodes[0] = 0.5 * (1.0 + diag(0));
    r.weights[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off.head(n - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_jacobi_unit: eigen solver failed");
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = 0.5 * (1.0 + solver.eigenvalues()(i));
    const double v0 = solver.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

// Generalized Gauss-Laguerre rule in u for u^a e^{-u} du. The returned
// weights already include the factor e^{u_i}, so sum w_i g(u_i) approximates
// int_0^inf g(u) u^a du for g carrying its own exponential decay.
inline GaussRule gauss_laguerre_scaled(int n, double a) {
  detail::require(n >= 1, "gauss_laguerre_scaled: need at least one node");
  detail::require_domain(a > -1.0, "gauss_laguerre_scaled: a must be > -1");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  if (n == 1) {
    r.nodes[0] = a + 1.0;
  } else {
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n - 1);
    for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + a + 1.0;
    for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(k * (k + a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_laguerre_scaled: eigen solver failed");
    for (int i = 0; i < n; ++i) r.nodes[i] = solver.eigenvalues()(i);
  }
  // Newton polish on psi_n using u psi_n' = n psi_n - sqrt(n(n+a)) psi_{n-1}.
  for (int i = 0; i < n; ++i) {
    double u = r.nodes[i];
    for (int it = 0; it < 3 && u > 0.0; ++it) {
      detail::ScaledValue h;
      detail::ScaledValue hm;
      detail::laguerre_sweep(n, a, u, [&](int k, detail::ScaledValue cur, detail::ScaledValue prev) {
        if (k == n) h = cur, hm = prev;
      });
      const double denom = n * h.mantissa - std::sqrt(n * (n + a)) * hm.mantissa;
      if (denom == 0.0) break;
      const double step = u * h.mantissa / denom;
      if (!std::isfinite(step) || std::fabs(step) > 0.1 * u) break;
      u -= step;
      if (std::fabs(step) < 1e-15 * u) break;
    }
    r.nodes[i] = u;
  }
  // Christoffel numbers: 1 / sum_k psi_k(u)^2, with e^{u} folded in.
  for (int i = 0; i < n; ++i) {
    const double u = r.nodes[i];
    double log_scale = -0.5 * u - 0.5 * std::lgamma(a + 1.0);
    double prev = 0.0;
    double cur = 1.0;
    double sum = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
      const double next = ((2.0 * k + a + 1.0 - u) * cur - std::sqrt(k * (k + a)) * prev) /
                          std::sqrt((k + 1.0) * (k + a + 1.0));
      prev = cur;
      cur = next;
      if (std::fabs(cur) > 1e100) {
        cur *= 1e-100;
        prev *= 1e-100;
        sum *= 1e-200;
        log_scale += 100.0 * std::numbers::ln10;
      }
      sum += cur * cur;
    }
    r.weights[i] = std::exp(-2.0 * log_scale - std::log(sum));
  }
  for (int i = 0; i < n; ++i) {
    const bool ok = std::isfinite(r.nodes[i]) && r.nodes[i] > 0.0 && std::isfinite(r.weights[i]) && r.weights[i] > 0.0 &&
                    (i == 0 || r.nodes[i] > r.nodes[i - 1]);
    if (!ok) {
      throw std::runtime_error("gauss_laguerre_scaled: node " + std::to_string(i) + " of order " + std::to_string(n) +
                               " lost positivity or ordering; reduce the order");
    }
  }
  return r;
}

}  // namespace laguerre_riesz
