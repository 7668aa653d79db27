#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "../special_fn.hpp"

namespace laguerre_riesz::lab {

// Test functions used to show that the summability thresholds are sharp.
//   f_n(x) = sign(phi_n^A(|x|)) |phi_n^A(|x|)|^{1/(p-1)},  A = |alpha| + d - 1
//   g_n(x) = phi_n^{alpha_1}(x_1) phi_0^{alpha_2}(x_2) ... phi_0^{alpha_d}(x_d)
//   G_n(x) = g_n(x) (1 + |x|)^{-beta}
struct SharpnessFamily {
  enum class Kind { f_n, g_n, G_n };

  Kind kind = Kind::f_n;
  int n = 0;
  double p = 2.0;
  double beta = 0.0;
  AlphaVector alpha{0.0};

  void validate() const {
    detail::require(n >= 0, "SharpnessFamily: n must be non-negative");
    if (kind == Kind::f_n) detail::require_domain(p > 1.0, "SharpnessFamily: f_n needs p > 1");
    if (kind == Kind::G_n) detail::require_domain(beta >= 0.0, "SharpnessFamily: G_n needs beta >= 0");
  }

  double operator()(std::span<const double> x) const {
    validate();
    detail::require(x.size() == alpha.dim(), "SharpnessFamily: point dimension does not match alpha");
    if (kind == Kind::f_n) {
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      return radial_power(laguerre_fn_1d(n, alpha.radial_type(), std::sqrt(r2)), p);
    }
    double g = laguerre_fn_1d(n, alpha[0], x[0]);
    for (std::size_t j = 1; j < x.size(); ++j) g *= laguerre_fn_1d(0, alpha[j], x[j]);
    if (kind == Kind::g_n) return g;
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return g * std::pow(1.0 + std::sqrt(r2), -beta);
  }

  // sign(v) |v|^{1/(p-1)}, the pointwise map that builds f_n from phi_n.
  static double radial_power(double v, double p) {
    if (v == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(v), 1.0 / (p - 1.0)), v);
  }
};

}  // namespace laguerre_riesz::lab
