#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "special_fn.hpp"

namespace laguerre_riesz {

// Rule for int_0^inf g(x) x^{2a+1} dx with g of Gaussian decay, obtained
// from the generalized Gauss-Laguerre rule under u = x^2.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double alpha_param = 0.0;
  int order = 0;

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

inline constexpr int kMaxRuleOrder = 20000;

inline QuadratureRule build_rule(double a, int order) {
  detail::require(order >= 2, "build_rule: order must be at least 2");
  detail::require(order <= kMaxRuleOrder, "build_rule: order above the supported maximum");
  detail::require_domain(std::isfinite(a) && a > -1.0, "build_rule: a must be > -1");
  const GaussRule u_rule = gauss_laguerre_scaled(order, a);
  QuadratureRule r;
  r.alpha_param = a;
  r.order = order;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = std::sqrt(u_rule.nodes[i]);
    r.weights[i] = 0.5 * u_rule.weights[i];
  }
  return r;
}

// Default order for integrands that are degree <= 2N polynomials times a Gaussian.
inline int default_rule_order(int max_degree) { return 2 * max_degree + 32; }

// ---------------------------------------------------------------------------
// Rule cache: text table, one record per line
//   a order node_1 ... node_k w_1 ... w_k
// in 17-significant-digit decimal.

inline void write_rule_record(std::ostream& os, const QuadratureRule& r) {
  std::ostringstream line;
  line << std::setprecision(17) << r.alpha_param << ' ' << r.order;
  for (double x : r.nodes) line << ' ' << x;
  for (double w : r.weights) line << ' ' << w;
  os << line.str() << '\n';
}

inline std::vector<QuadratureRule> read_rule_table(std::istream& is) {
  std::vector<QuadratureRule> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    QuadratureRule r;
    if (!(in >> r.alpha_param >> r.order) || r.order < 1) {
      throw std::runtime_error("read_rule_table: malformed record header");
    }
    r.nodes.resize(r.order);
    r.weights.resize(r.order);
    for (auto& x : r.nodes) {
      if (!(in >> x)) throw std::runtime_error("read_rule_table: truncated node list");
    }
    for (auto& w : r.weights) {
      if (!(in >> w)) throw std::runtime_error("read_rule_table: truncated weight list");
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Process-wide memo of rules, optionally backed by a file. Concurrent reads
// are safe; insertion is serialized.
class RuleCache {
 public:
  RuleCache() = default;
  explicit RuleCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    for (auto& r : read_rule_table(in)) rules_.emplace(Key{r.alpha_param, r.order}, std::move(r));
  }

  const QuadratureRule& get(double a, int order) {
    std::lock_guard<std::mutex> lock(mutex_);
    const Key key{a, order};
    auto it = rules_.find(key);
    if (it != rules_.end()) return it->second;
    auto [pos, inserted] = rules_.emplace(key, build_rule(a, order));
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app);
      if (out) write_rule_record(out, pos->second);
    }
    return pos->second;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return rules_.size();
  }

 private:
  using Key = std::pair<double, int>;
  std::string path_;
  mutable std::mutex mutex_;
  std::map<Key, QuadratureRule> rules_;
};

inline RuleCache& default_rule_cache() {
  static RuleCache cache;
  return cache;
}

// ---------------------------------------------------------------------------
// Tensor-product integration against d mu_alpha.

class TensorGrid {
 public:
  TensorGrid(const AlphaVector& alpha, int order) {
    rules_.reserve(alpha.dim());
    for (std::size_t j = 0; j < alpha.dim(); ++j) rules_.push_back(&default_rule_cache().get(alpha[j], order));
  }

  std::size_t dim() const noexcept { return rules_.size(); }
  const QuadratureRule& rule(std::size_t j) const { return *rules_[j]; }

  // visit(point, weight, flat index) for every tensor node, in odometer order.
  template <class Visit>
  void for_each(Visit&& visit) const {
    const std::size_t d = rules_.size();
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> point(d);
    std::size_t flat = 0;
    while (true) {
      double w = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        point[j] = rules_[j]->nodes[idx[j]];
        w *= rules_[j]->weights[idx[j]];
      }
      visit(std::span<const double>(point), w, flat++);
      std::size_t j = 0;
      while (j < d) {
        if (++idx[j] < rules_[j]->nodes.size()) break;
        idx[j] = 0;
        ++j;
      }
      if (j == d) return;
    }
  }

 private:
  std::vector<const QuadratureRule*> rules_;
};

template <class F, class G>
double inner_product(F&& f, G&& g, const AlphaVector& alpha, int order) {
  const TensorGrid grid(alpha, order);
  double sum = 0.0;
  grid.for_each([&](std::span<const double> x, double w, std::size_t) {
    const double fx = f(x);
    const double gx = g(x);
    if (!std::isfinite(fx) || !std::isfinite(gx)) {
      throw integration_error("inner_product: non-finite integrand value");
    }
    sum += w * fx * gx;
  });
  return sum;
}

enum class WeightKind { unit, power, inhomogeneous };

// unit: 1; power: |x|^beta; inhomogeneous: (1+|x|)^{sign*beta}.
struct WeightSpec {
  WeightKind kind = WeightKind::unit;
  double beta = 0.0;
  int sign = 1;

  static WeightSpec unit() { return {}; }
  static WeightSpec power(double beta) { return {WeightKind::power, beta, 1}; }
  static WeightSpec inhomogeneous(double beta, int sign) {
    detail::require(sign == 1 || sign == -1, "WeightSpec: sign must be +1 or -1");
    return {WeightKind::inhomogeneous, beta, sign};
  }

  double at_radius(double r) const {
    switch (kind) {
      case WeightKind::unit: return 1.0;
      case WeightKind::power: return std::pow(r, beta);
      case WeightKind::inhomogeneous: return std::pow(1.0 + r, sign * beta);
    }
    return 1.0;
  }

  double operator()(std::span<const double> x) const {
    if (kind == WeightKind::unit) return 1.0;
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return at_radius(std::sqrt(r2));
  }

  // w^{-1/(p-1)} is again a WeightSpec of the same kind.
  WeightSpec dual(double p) const {
    const double e = -1.0 / (p - 1.0);
    switch (kind) {
      case WeightKind::unit: return unit();
      case WeightKind::power: return power(beta * e);
      case WeightKind::inhomogeneous: return {WeightKind::inhomogeneous, std::fabs(beta * e), (sign * e * beta) >= 0 ? 1 : -1};
    }
    return unit();
  }
};

template <class F>
double weighted_lp_norm(F&& f, double p, const AlphaVector& alpha, const WeightSpec& weight, int order) {
  detail::require(p >= 1.0 && std::isfinite(p), "weighted_lp_norm: p must be in [1, inf)");
  const TensorGrid grid(alpha, order);
  double sum = 0.0;
  grid.for_each([&](std::span<const double> x, double w, std::size_t) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw integration_error("weighted_lp_norm: non-finite integrand value");
    sum += w * std::pow(std::fabs(fx), p) * weight(x);
  });
  return std::pow(sum, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Balls, cubes and their measures.

enum class BallShape { euclidean_ball, product_cube };

struct BallSpec {
  std::vector<double> center;
  double radius = 1.0;
  BallShape shape = BallShape::euclidean_ball;
};

struct BallMeasure {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
  bool converged = true;  // false when the sampled estimate misses 1e-3 relative error
};

struct SamplingOptions {
  std::uint64_t seed = 0x5eed;
  int shifts = 16;
  int points_per_shift = 4096;  // shifts * points = 2^16 by default
};

namespace detail {

inline void check_ball(const BallSpec& ball, const AlphaVector& alpha) {
  require(ball.center.size() == alpha.dim(), "ball: center dimension does not match alpha");
  require(ball.radius > 0.0 && std::isfinite(ball.radius), "ball: radius must be positive");
  for (double c : ball.center) require(c >= 0.0 && std::isfinite(c), "ball: center coordinates must be >= 0");
}

// int_lo^hi x^{2a+1} dx.
inline double power_mass(double a, double lo, double hi) {
  const double e = 2.0 * a + 2.0;
  return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

// Inverse CDF of the density proportional to x^{2a+1} on [lo, hi].
inline double power_inverse_cdf(double a, double lo, double hi, double v) {
  const double e = 2.0 * a + 2.0;
  const double lo_e = std::pow(lo, e);
  return std::pow(lo_e + v * (std::pow(hi, e) - lo_e), 1.0 / e);
}

inline double fractional(double x) { return x - std::floor(x); }

// Generalized golden-ratio (Kronecker) sequence generator for dimension d.
inline std::vector<double> kronecker_generator(std::size_t d) {
  double phi = 2.0;
  for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / (static_cast<double>(d) + 1.0));
  std::vector<double> g(d);
  for (std::size_t j = 0; j < d; ++j) g[j] = fractional(std::pow(1.0 / phi, static_cast<double>(j + 1)));
  return g;
}

// Estimates mu-averages over the bounding cube of a ball by randomly shifted
// lattice points drawn from the product density prop. to x^{2a+1}; calls
// visit(point) -> value and returns (mean, std error) of the cube average.
template <class Visit>
std::pair<double, double> cube_sampled_mean(const std::vector<double>& lo, const std::vector<double>& hi,
                                            const AlphaVector& alpha, const SamplingOptions& opt, Visit&& visit) {
  const std::size_t d = lo.size();
  const auto gen = kronecker_generator(d);
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> means;
  means.reserve(opt.shifts);
  std::vector<double> point(d);
  for (int s = 0; s < opt.shifts; ++s) {
    std::vector<double> shift(d);
    for (auto& v : shift) v = unif(rng);
    double acc = 0.0;
    for (int i = 0; i < opt.points_per_shift; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double v = fractional(shift[j] + (i + 1) * gen[j]);
        point[j] = power_inverse_cdf(alpha[j], lo[j], hi[j], v);
      }
      acc += visit(std::span<const double>(point));
    }
    means.push_back(acc / opt.points_per_shift);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(means.size());
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  const double n = static_cast<double>(means.size());
  const double se = means.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
  return {mean, se};
}

inline void bounding_cube(const BallSpec& ball, std::vector<double>& lo, std::vector<double>& hi) {
  lo.resize(ball.center.size());
  hi.resize(ball.center.size());
  for (std::size_t j = 0; j < ball.center.size(); ++j) {
    lo[j] = std::max(ball.center[j] - ball.radius, 0.0);
    hi[j] = ball.center[j] + ball.radius;
  }
}

inline bool inside_ball(const BallSpec& ball, std::span<const double> y) {
  double r2 = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r2 += (y[j] - ball.center[j]) * (y[j] - ball.center[j]);
  return r2 < ball.radius * ball.radius;
}

}  // namespace detail

inline double cube_measure(std::span<const double> center, double radius, const AlphaVector& alpha) {
  double m = 1.0;
  for (std::size_t j = 0; j < center.size(); ++j) {
    m *= detail::power_mass(alpha[j], std::max(center[j] - radius, 0.0), center[j] + radius);
  }
  return m;
}

inline BallMeasure measure_ball(const BallSpec& ball, const AlphaVector& alpha, const SamplingOptions& opt = {}) {
  detail::check_ball(ball, alpha);
  if (ball.shape == BallShape::product_cube || alpha.dim() == 1) {
    return {cube_measure(ball.center, ball.radius, alpha), 0.0, true, true};
  }
  std::vector<double> lo;
  std::vector<double> hi;
  detail::bounding_cube(ball, lo, hi);
  const double cube = cube_measure(ball.center, ball.radius, alpha);
  auto [frac, se] = detail::cube_sampled_mean(lo, hi, alpha, opt, [&](std::span<const double> y) {
    return detail::inside_ball(ball, y) ? 1.0 : 0.0;
  });
  BallMeasure m{cube * frac, cube * se, false, true};
  m.converged = frac > 0.0 && se <= 1e-3 * frac;
  return m;
}

// sup over the supplied (center, radius, lambda) grid of
// mu(Q(x, lambda R)) / (lambda^{2|alpha|+2d} mu(Q(x, R))), using cubes.
inline double doubling_constant(const AlphaVector& alpha, const std::vector<std::vector<double>>& centers,
                                const std::vector<double>& radii, const std::vector<double>& lambdas) {
  const double dim = alpha.homogeneous_dimension();
  double c = 0.0;
  for (const auto& x : centers) {
    for (double r : radii) {
      const double base = cube_measure(x, r, alpha);
      for (double l : lambdas) c = std::max(c, cube_measure(x, l * r, alpha) / (std::pow(l, dim) * base));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Muckenhoupt A_p constants.

struct ApResult {
  double value = 0.0;
  std::size_t balls_used = 0;
  std::size_t balls_skipped = 0;  // zero-measure balls
};

namespace detail {

// int_lo^hi w(x) x^{2a+1} dx for a 1-d weight.
inline double weighted_interval_mass(const WeightSpec& w, double a, double lo, double hi) {
  if (w.kind == WeightKind::unit) return power_mass(a, lo, hi);
  if (w.kind == WeightKind::power) {
    const double e = 2.0 * a + 2.0 + w.beta;
    if (e <= 0.0 && lo == 0.0) return std::numeric_limits<double>::infinity();
    if (std::fabs(e) < 1e-14) return std::log(hi / lo);
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
  }
  // Smooth factor (1+x)^{+-beta} against x^{2a+1}: Gauss-Jacobi from 0, by difference.
  static thread_local std::map<double, GaussRule> rules;
  auto it = rules.find(a);
  if (it == rules.end()) it = rules.emplace(a, gauss_jacobi_unit(200, 2.0 * a + 1.0, 0.0)).first;
  auto from_zero = [&](double h) {
    if (h <= 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < it->second.size(); ++i) s += it->second.weights[i] * w.at_radius(h * it->second.nodes[i]);
    return s * std::pow(h, 2.0 * a + 2.0);
  };
  return from_zero(hi) - from_zero(lo);
}

}  // namespace detail

inline ApResult ap_constant(const WeightSpec& weight, double p, const AlphaVector& alpha,
                            const std::vector<BallSpec>& balls, const SamplingOptions& opt = {}) {
  detail::require(p > 1.0 && std::isfinite(p), "ap_constant: p must be in (1, inf)");
  detail::require(!balls.empty(), "ap_constant: ball family is empty");
  const WeightSpec dual = weight.dual(p);
  ApResult out;
  for (const auto& ball : balls) {
    detail::check_ball(ball, alpha);
    double avg_w = 0.0;
    double avg_dual = 0.0;
    if (alpha.dim() == 1) {
      const double lo = std::max(ball.center[0] - ball.radius, 0.0);
      const double hi = ball.center[0] + ball.radius;
      const double mass = detail::power_mass(alpha[0], lo, hi);
      if (!(mass > 0.0)) {
        ++out.balls_skipped;
        continue;
      }
      avg_w = detail::weighted_interval_mass(weight, alpha[0], lo, hi) / mass;
      avg_dual = detail::weighted_interval_mass(dual, alpha[0], lo, hi) / mass;
    } else {
      std::vector<double> lo;
      std::vector<double> hi;
      detail::bounding_cube(ball, lo, hi);
      const bool cube = ball.shape == BallShape::product_cube;
      double num_w = 0.0;
      double num_dual = 0.0;
      auto [frac, se] = detail::cube_sampled_mean(lo, hi, alpha, opt, [&](std::span<const double> y) {
        if (!cube && !detail::inside_ball(ball, y)) return 0.0;
        num_w += weight(y);
        num_dual += dual(y);
        return 1.0;
      });
      (void)se;
      if (!(frac > 0.0)) {
        ++out.balls_skipped;
        continue;
      }
      const double hits = frac * opt.shifts * opt.points_per_shift;
      avg_w = num_w / hits;
      avg_dual = num_dual / hits;
    }
    const double value = avg_w * std::pow(avg_dual, p - 1.0);
    out.value = std::max(out.value, value);
    ++out.balls_used;
  }
  return out;
}

}  // namespace laguerre_riesz
