#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "measure.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "special_fn.hpp"

namespace laguerre_riesz {

inline constexpr std::size_t kDefaultCompositionCap = 1000000;

// Number of compositions of n into d non-negative parts, C(n+d-1, d-1).
inline double composition_count(int n, std::size_t d) {
  return std::round(std::exp(std::lgamma(n + static_cast<double>(d)) - std::lgamma(n + 1.0) -
                             std::lgamma(static_cast<double>(d))));
}

// All mu with |mu| = n, in ascending lexicographic order.
inline std::vector<MultiIndex> compositions(int n, std::size_t d, std::size_t cap = kDefaultCompositionCap) {
  detail::require(n >= 0 && d >= 1, "compositions: need n >= 0 and d >= 1");
  if (composition_count(n, d) > static_cast<double>(cap)) {
    throw std::length_error("compositions: count exceeds the configured cap");
  }
  std::vector<MultiIndex> out;
  std::vector<int> cur(d, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == d) {
      cur[j] = left;
      out.emplace_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[j] = k;
      rec(j + 1, left - k);
    }
  };
  rec(0, n);
  return out;
}

// Finite table of coefficients <f, phi_mu> for every |mu| <= N, ordered by
// degree and then lexicographically.
class SpectralCoefficients {
 public:
  SpectralCoefficients(AlphaVector alpha, int max_degree) : alpha_(std::move(alpha)), max_degree_(max_degree) {
    detail::require(max_degree >= 0, "SpectralCoefficients: max degree must be non-negative");
    for (int n = 0; n <= max_degree; ++n) {
      degree_start_.push_back(indices_.size());
      for (auto& mu : compositions(n, alpha_.dim())) {
        position_.emplace(mu, indices_.size());
        indices_.push_back(std::move(mu));
        degrees_.push_back(n);
      }
    }
    degree_start_.push_back(indices_.size());
    values_.assign(indices_.size(), 0.0);
  }

  const AlphaVector& alpha() const noexcept { return alpha_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const MultiIndex& index(std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  double value(std::size_t i) const { return values_[i]; }
  double& value(std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  // Positions [first, last) holding the indices of total degree n.
  std::pair<std::size_t, std::size_t> degree_range(int n) const {
    detail::require(n >= 0 && n <= max_degree_, "SpectralCoefficients: degree out of range");
    return {degree_start_[n], degree_start_[n + 1]};
  }

  std::size_t position(const MultiIndex& mu) const {
    auto it = position_.find(mu);
    if (it == position_.end()) throw std::out_of_range("SpectralCoefficients: index not in table");
    return it->second;
  }
  double at(const MultiIndex& mu) const { return values_[position(mu)]; }
  void set(const MultiIndex& mu, double v) { values_[position(mu)] = v; }

  // ||f||^2 - sum c^2 when the table came from expand().
  std::optional<double> residual;

  bool same_shape(const SpectralCoefficients& o) const { return alpha_ == o.alpha_ && max_degree_ == o.max_degree_; }

  // Table with one unit entry.
  static SpectralCoefficients unit(const AlphaVector& alpha, int max_degree, const MultiIndex& mu) {
    SpectralCoefficients c(alpha, max_degree);
    c.set(mu, 1.0);
    return c;
  }

 private:
  AlphaVector alpha_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_start_;
  std::vector<double> values_;
  std::map<MultiIndex, std::size_t> position_;
};

namespace detail {

// phi_k^a(x) for k = 0..n.
inline std::vector<double> phi_table(int n, double a, double x) {
  auto t = laguerre_function_table(n, a, x * x);
  for (auto& v : t) v *= std::numbers::sqrt2;
  return t;
}

// Discrete convolution of per-coordinate sequences truncated at degree N:
// out[n] = sum_{|mu| = n} prod_j seq_j[mu_j].
inline std::vector<double> convolve_degrees(const std::vector<std::vector<double>>& seqs, int N) {
  std::vector<double> acc(seqs[0].begin(), seqs[0].begin() + N + 1);
  for (std::size_t j = 1; j < seqs.size(); ++j) {
    std::vector<double> next(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
      double s = 0.0;
      for (int k = 0; k <= n; ++k) s += acc[k] * seqs[j][n - k];
      next[n] = s;
    }
    acc = std::move(next);
  }
  return acc;
}

inline void check_point(const AlphaVector& alpha, std::span<const double> x) {
  require(x.size() == alpha.dim(), "point dimension does not match alpha");
  for (double v : x) require_domain(std::isfinite(v) && v >= 0.0, "point coordinates must be finite and >= 0");
}

}  // namespace detail

template <class F>
SpectralCoefficients expand(F&& f, const AlphaVector& alpha, int N, int order) {
  detail::require(N >= 0, "expand: N must be non-negative");
  const TensorGrid grid(alpha, order);
  const std::size_t d = alpha.dim();
  // Per-dimension tables phi_k(x_i) at the rule nodes.
  std::vector<std::vector<std::vector<double>>> tables(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto& rule = grid.rule(j);
    tables[j].resize(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) tables[j][i] = detail::phi_table(N, alpha[j], rule.nodes[i]);
  }
  std::vector<double> fw;
  std::vector<std::vector<std::size_t>> node_index;
  double norm2 = 0.0;
  {
    std::vector<std::size_t> idx(d, 0);
    grid.for_each([&](std::span<const double> x, double w, std::size_t) {
      const double fx = f(x);
      if (!std::isfinite(fx)) throw integration_error("expand: non-finite function value");
      fw.push_back(w * fx);
      node_index.push_back(idx);
      norm2 += w * fx * fx;
      for (std::size_t j = 0; j < d; ++j) {
        if (++idx[j] < grid.rule(j).nodes.size()) break;
        idx[j] = 0;
      }
    });
  }
  SpectralCoefficients c(alpha, N);
  parallel_for(c.size(), [&](std::size_t m) {
    const auto& mu = c.index(m);
    double s = 0.0;
    for (std::size_t p = 0; p < fw.size(); ++p) {
      double prod = fw[p];
      for (std::size_t j = 0; j < d; ++j) prod *= tables[j][node_index[p][j]][mu[j]];
      s += prod;
    }
    c.value(m) = s;
  });
  double captured = 0.0;
  for (double v : c.values()) captured += v * v;
  c.residual = norm2 - captured;
  return c;
}

inline SpectralCoefficients project(const SpectralCoefficients& coeffs, int n) {
  detail::require(n >= 0, "project: n must be non-negative");
  if (n > coeffs.max_degree()) throw std::out_of_range("project: degree above the table's cutoff");
  SpectralCoefficients out(coeffs.alpha(), coeffs.max_degree());
  auto [lo, hi] = coeffs.degree_range(n);
  for (std::size_t i = lo; i < hi; ++i) out.value(i) = coeffs.value(i);
  return out;
}

// Values P_n f(x) for n = 0..N, from per-coordinate phi tables.
inline std::vector<double> degree_components(const SpectralCoefficients& coeffs, std::span<const double> x) {
  const auto& alpha = coeffs.alpha();
  detail::check_point(alpha, x);
  const int N = coeffs.max_degree();
  std::vector<std::vector<double>> tables(alpha.dim());
  for (std::size_t j = 0; j < alpha.dim(); ++j) tables[j] = detail::phi_table(N, alpha[j], x[j]);
  std::vector<double> out(N + 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double c = coeffs.value(i);
    if (c == 0.0) continue;
    const auto& mu = coeffs.index(i);
    double prod = c;
    for (std::size_t j = 0; j < alpha.dim(); ++j) prod *= tables[j][mu[j]];
    out[coeffs.degree(i)] += prod;
  }
  return out;
}

inline double evaluate(const SpectralCoefficients& coeffs, std::span<const double> x) {
  double s = 0.0;
  for (double v : degree_components(coeffs, x)) s += v;
  return s;
}

// P_n(x, y) as the explicit sum over compositions of n.
inline double projection_kernel(int n, const AlphaVector& alpha, std::span<const double> x, std::span<const double> y,
                                std::size_t cap = kDefaultCompositionCap) {
  detail::check_point(alpha, x);
  detail::check_point(alpha, y);
  double s = 0.0;
  for (const auto& mu : compositions(n, alpha.dim(), cap)) s += laguerre_fn_d(mu, alpha, x) * laguerre_fn_d(mu, alpha, y);
  return s;
}

// P_n(x, y) for every n <= N at once, by convolving per-coordinate products.
inline std::vector<double> projection_kernels(int N, const AlphaVector& alpha, std::span<const double> x,
                                              std::span<const double> y) {
  detail::check_point(alpha, x);
  detail::check_point(alpha, y);
  std::vector<std::vector<double>> seqs(alpha.dim());
  for (std::size_t j = 0; j < alpha.dim(); ++j) {
    auto px = detail::phi_table(N, alpha[j], x[j]);
    const auto py = detail::phi_table(N, alpha[j], y[j]);
    for (int k = 0; k <= N; ++k) px[k] *= py[k];
    seqs[j] = std::move(px);
  }
  return detail::convolve_degrees(seqs, N);
}

// ---------------------------------------------------------------------------
// Radial reduction.

struct RadialProfile {
  std::function<double(double)> f0;
  AlphaVector alpha;

  double reduced_type() const { return alpha.radial_type(); }
};

// R_n(f0) = int_0^inf f0(r) phi_n^A(r) r^{2A+1} dr with A = |alpha| + d - 1.
inline double radial_coefficient(const RadialProfile& profile, int n, int order) {
  const double A = profile.reduced_type();
  detail::require_domain(A > -1.0, "radial_coefficient: reduced type must be > -1");
  const auto& rule = default_rule_cache().get(A, order);
  return rule.integrate([&](double r) {
    const double v = profile.f0(r) * laguerre_fn_1d(n, A, r);
    if (!std::isfinite(v)) throw integration_error("radial_coefficient: non-finite integrand value");
    return v;
  });
}

inline double radial_project(const RadialProfile& profile, int n, double r, int order) {
  detail::require_domain(r >= 0.0 && std::isfinite(r), "radial_project: r must be finite and >= 0");
  return radial_coefficient(profile, n, order) * laguerre_fn_1d(n, profile.reduced_type(), r);
}

// ---------------------------------------------------------------------------
// Polynomial-normalized functions and the simplex identity.

// L~_k^a(u) = (Gamma(a+1) k! / Gamma(k+a+1))^{1/2} L_k^a(u), k = 0..n.
inline std::vector<double> normalized_poly_table(int n, double a, double u) {
  detail::check_order_and_type(n, a);
  std::vector<double> out(n + 1);
  const double shift = 0.5 * u + 0.5 * std::lgamma(a + 1.0);
  detail::laguerre_sweep(n, a, u, [&](int k, detail::ScaledValue h, detail::ScaledValue) {
    h.log_scale += shift;
    out[k] = h.value();
  });
  return out;
}

inline double normalized_poly(int n, double a, double u) { return normalized_poly_table(n, a, u)[n]; }

// P~_n(x, y) = sum_{|mu| = n} prod_j L~_{mu_j}(x_j) L~_{mu_j}(y_j), in the u-variables.
inline double normalized_kernel(int n, const AlphaVector& alpha, std::span<const double> x, std::span<const double> y) {
  detail::check_point(alpha, x);
  detail::check_point(alpha, y);
  std::vector<std::vector<double>> seqs(alpha.dim());
  for (std::size_t j = 0; j < alpha.dim(); ++j) {
    auto px = normalized_poly_table(n, alpha[j], x[j]);
    const auto py = normalized_poly_table(n, alpha[j], y[j]);
    for (int k = 0; k <= n; ++k) px[k] *= py[k];
    seqs[j] = std::move(px);
  }
  return detail::convolve_degrees(seqs, n)[n];
}

struct SimplexCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Integrates P~_n(x, r y) y^alpha over the unit simplex and compares with
// the closed form in L~_n of the reduced type. For d = 2 this is a single
// Gauss-Jacobi rule; d > 2 uses a stick-breaking product of rules and is
// experimental.
inline SimplexCheck simplex_identity_check(int n, const AlphaVector& alpha, std::span<const double> x, double r,
                                           int order = 0) {
  detail::require(n >= 0, "simplex_identity_check: n must be non-negative");
  detail::require(alpha.dim() >= 2, "simplex_identity_check: needs d >= 2");
  detail::check_point(alpha, x);
  detail::require_domain(r > 0.0, "simplex_identity_check: r must be positive");
  const std::size_t d = alpha.dim();
  if (order <= 0) order = n + 8;
  std::vector<GaussRule> rules;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    double tail = 0.0;
    for (std::size_t j = i + 1; j < d; ++j) tail += alpha[j];
    tail += static_cast<double>(d - 2 - i);
    rules.push_back(gauss_jacobi_unit(order, alpha[i], tail));
  }
  std::vector<std::size_t> idx(d - 1, 0);
  std::vector<double> y(d);
  double lhs = 0.0;
  while (true) {
    double w = 1.0;
    double rest = 1.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
      const double s = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
      y[i] = r * rest * s;
      rest *= 1.0 - s;
    }
    y[d - 1] = r * rest;
    lhs += w * normalized_kernel(n, alpha, x, y);
    std::size_t i = 0;
    while (i + 1 < d) {
      if (++idx[i] < rules[i].size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i + 1 == d) break;
  }
  double log_ratio = -std::lgamma(alpha.l1() + static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) log_ratio += std::lgamma(alpha[j] + 1.0);
  double xsum = 0.0;
  for (double v : x) xsum += v;
  const double A = alpha.radial_type();
  return {lhs, std::exp(log_ratio) * normalized_poly(n, A, r) * normalized_poly(n, A, xsum)};
}

// ---------------------------------------------------------------------------
// Coefficient table file format:
//   alpha=<a_1,...,a_d> N=<int>
//   mu_1,...,mu_d value

namespace detail {
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline void write_coefficients(std::ostream& os, const SpectralCoefficients& c) {
  os << "alpha=";
  for (std::size_t j = 0; j < c.alpha().dim(); ++j) os << (j ? "," : "") << detail::format_g17(c.alpha()[j]);
  os << " N=" << c.max_degree() << '\n';
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& mu = c.index(i);
    for (std::size_t j = 0; j < mu.size(); ++j) os << (j ? "," : "") << mu[j];
    os << ' ' << detail::format_g17(c.value(i)) << '\n';
  }
}

inline SpectralCoefficients read_coefficients(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || header.rfind("alpha=", 0) != 0) {
    throw std::runtime_error("read_coefficients: missing 'alpha=' header");
  }
  const auto npos = header.find(" N=");
  if (npos == std::string::npos) throw std::runtime_error("read_coefficients: missing 'N=' in header");
  std::vector<double> alpha;
  std::stringstream list(header.substr(6, npos - 6));
  for (std::string item; std::getline(list, item, ',');) alpha.push_back(std::strtod(item.c_str(), nullptr));
  const int N = std::stoi(header.substr(npos + 3));
  SpectralCoefficients c(AlphaVector(alpha), N);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw std::runtime_error("read_coefficients: malformed line '" + line + "'");
    std::vector<int> mu;
    std::stringstream idx(line.substr(0, sp));
    for (std::string item; std::getline(idx, item, ',');) mu.push_back(std::stoi(item));
    c.set(MultiIndex(mu), std::strtod(line.c_str() + sp + 1, nullptr));
  }
  return c;
}

}  // namespace laguerre_riesz
