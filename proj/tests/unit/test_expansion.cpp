#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "laguerre_riesz/expansion.hpp"

using namespace laguerre_riesz;

namespace {

double gaussian2(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::exp(-0.5 * r2);
}

}  // namespace

TEST(Compositions, CountAndOrder) {
  const auto c = compositions(3, 3);
  EXPECT_EQ(c.size(), 10u);
  EXPECT_DOUBLE_EQ(composition_count(3, 3), 10.0);
  EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
  for (const auto& mu : c) EXPECT_EQ(mu.degree(), 3);
  EXPECT_THROW(compositions(400, 4, 1000), std::length_error);
  EXPECT_THROW(projection_kernel(400, AlphaVector{0.0, 0.0, 0.0, 0.0}, std::vector<double>{1, 1, 1, 1},
                                 std::vector<double>{1, 1, 1, 1}, 1000),
               std::length_error);
}

TEST(Expand, SingleEigenfunctionIsUnitIndicator) {
  const AlphaVector alpha{0.5, -0.3};
  const MultiIndex target{1, 2};
  const auto c = expand([&](auto x) { return laguerre_fn_d(target, alpha, x); }, alpha, 5, default_rule_order(5));
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_NEAR(c.value(i), c.index(i) == target ? 1.0 : 0.0, 1e-9) << i;
  }
  ASSERT_TRUE(c.residual.has_value());
  EXPECT_NEAR(*c.residual, 0.0, 1e-9);
}

TEST(Expand, OddIntegrandAgainstSmoothOracle) {
  // x1 * exp(-|x|^2/2) is odd in x1, so the rule in u = x^2 is not exact and
  // coefficients converge algebraically in the order. The oracle integrates in x.
  const AlphaVector alpha{-0.5, -0.5};
  auto f = [](std::span<const double> x) { return x[0] * gaussian2(x); };
  const int N = 6;
  const auto gl = composite_gauss_legendre(0.0, 14.0, 0.5, 24);
  auto oracle = [&](const MultiIndex& mu) {
    const double first = gl.integrate([&](double x) { return x * std::exp(-0.5 * x * x) * laguerre_fn_1d(mu[0], -0.5, x); });
    const double second = gl.integrate([&](double x) { return std::exp(-0.5 * x * x) * laguerre_fn_1d(mu[1], -0.5, x); });
    return first * second;
  };
  const auto base = expand(f, alpha, N, default_rule_order(N));
  const auto fine = expand(f, alpha, N, 16 * default_rule_order(N));
  double err_base = 0.0;
  double err_fine = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double want = oracle(base.index(i));
    err_base = std::max(err_base, std::fabs(base.value(i) - want));
    err_fine = std::max(err_fine, std::fabs(fine.value(i) - want));
    // The second factor is a half-line Hermite moment of H_{2k}, zero unless mu_2 = 0.
    if (base.index(i)[1] > 0) {
      EXPECT_NEAR(want, 0.0, 1e-12);
    }
    if (std::fabs(want) > 1e-2) {
      EXPECT_EQ(std::signbit(base.value(i)), std::signbit(want)) << i;
    }
  }
  EXPECT_LT(err_base, 5e-3);
  EXPECT_LT(err_fine, err_base / 8.0);
}

TEST(Expand, Linearity) {
  const AlphaVector alpha{0.2, 1.0};
  auto f = [](std::span<const double> x) { return (1.0 + x[0] * x[1]) * gaussian2(x); };
  auto f2 = [&](std::span<const double> x) { return 2.0 * f(x); };
  const auto a = expand(f, alpha, 6, 40);
  const auto b = expand(f2, alpha, 6, 40);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.value(i), 2.0 * a.value(i), 1e-12);
}

TEST(Expand, ParsevalForBandLimitedInput) {
  // x^2-polynomial of degree 2 times the Gaussian lies in the span of degrees <= 2 for alpha = 0.
  const AlphaVector alpha{0.0, 0.0};
  auto f = [](std::span<const double> x) { return (1.0 - 0.5 * x[0] * x[0] + 0.3 * x[1] * x[1] * x[0] * x[0]) * gaussian2(x); };
  const int N = 8;
  const auto c = expand(f, alpha, N, default_rule_order(N));
  const double norm2 = inner_product(f, f, alpha, default_rule_order(N));
  double captured = 0.0;
  for (double v : c.values()) captured += v * v;
  EXPECT_LE(std::fabs(norm2 - captured), 1e-6 * norm2);
  EXPECT_LE(captured, norm2 + 1e-12);
}

TEST(Project, PartitionIdempotenceAndRejection) {
  const AlphaVector alpha{0.5, 0.5};
  const auto c = expand([](auto x) { return (1.0 + x[0]) * gaussian2(x); }, alpha, 5, 30);
  std::vector<double> sum(c.size(), 0.0);
  for (int n = 0; n <= 5; ++n) {
    const auto p = project(c, n);
    const auto pp = project(p, n);
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(pp.value(i), p.value(i));
      sum[i] += p.value(i);
      EXPECT_EQ(p.value(i), c.degree(i) == n ? c.value(i) : 0.0);
    }
    for (int m = 0; m <= 5; ++m) {
      if (m == n) continue;
      const auto q = project(p, m);
      for (double v : q.values()) EXPECT_EQ(v, 0.0);
    }
  }
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(sum[i], c.value(i));
  EXPECT_THROW(project(c, 6), std::out_of_range);
}

TEST(Evaluate, UnitZeroAndRoundTrip) {
  const AlphaVector alpha{0.5, 1.0};
  const MultiIndex mu{2, 1};
  const std::vector<double> x{0.7, 1.3};
  EXPECT_NEAR(evaluate(SpectralCoefficients::unit(alpha, 4, mu), x), laguerre_fn_d(mu, alpha, x), 1e-15);
  EXPECT_EQ(evaluate(SpectralCoefficients(alpha, 4), x), 0.0);

  const int N = 12;
  auto f = [](std::span<const double> y) { return (2.0 - y[0] * y[0] + 0.5 * y[0] * y[0] * y[1] * y[1]) * gaussian2(y); };
  const auto c = expand(f, alpha, N, default_rule_order(N));
  for (double a : {0.3, 0.9, 1.7, 2.5}) {
    for (double b : {0.2, 1.1, 2.2}) {
      const std::vector<double> p{a, b};
      EXPECT_NEAR(evaluate(c, p), f(p), 1e-6) << a << "," << b;
    }
  }
}

TEST(ProjectionKernel, OneDimensionalSymmetricAndTensorSum) {
  const AlphaVector a1{0.7};
  const std::vector<double> x{0.8};
  const std::vector<double> y{1.9};
  EXPECT_DOUBLE_EQ(projection_kernel(5, a1, x, y), laguerre_fn_1d(5, 0.7, 0.8) * laguerre_fn_1d(5, 0.7, 1.9));

  const AlphaVector a3{0.5, -0.5, 1.0};
  const std::vector<double> x3{0.4, 1.2, 2.0};
  const std::vector<double> y3{1.5, 0.3, 0.9};
  EXPECT_NEAR(projection_kernel(6, a3, x3, y3), projection_kernel(6, a3, y3, x3), 1e-15);
  const auto all = projection_kernels(8, a3, x3, y3);
  for (int n = 0; n <= 8; ++n) EXPECT_NEAR(all[n], projection_kernel(n, a3, x3, y3), 1e-13) << n;
}

TEST(ProjectionKernel, ReproducingProperty) {
  const AlphaVector alpha{0.5, 0.0};
  const std::vector<double> x{0.6, 1.4};
  const int order = default_rule_order(8);
  for (const MultiIndex& mu : {MultiIndex{2, 1}, MultiIndex{0, 3}, MultiIndex{1, 1}, MultiIndex{4, 0}}) {
    const double got = inner_product([&](auto y) { return projection_kernel(3, alpha, x, y); },
                                     [&](auto y) { return laguerre_fn_d(mu, alpha, y); }, alpha, order);
    const double want = mu.degree() == 3 ? laguerre_fn_d(mu, alpha, x) : 0.0;
    EXPECT_NEAR(got, want, 1e-8);
  }
}

TEST(ProjectionKernel, NormalizedKernelRelation) {
  for (const AlphaVector& alpha : {AlphaVector{0.5, 0.5}, AlphaVector{-0.5, 1.5, 0.0}}) {
    const std::size_t d = alpha.dim();
    std::vector<double> x(d);
    std::vector<double> y(d);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = 0.5 + 0.4 * j;
      y[j] = 1.3 - 0.3 * j;
    }
    std::vector<double> ux(d);
    std::vector<double> uy(d);
    double c = std::pow(2.0, static_cast<double>(d));
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      ux[j] = x[j] * x[j];
      uy[j] = y[j] * y[j];
      c /= std::tgamma(alpha[j] + 1.0);
      r2 += ux[j] + uy[j];
    }
    for (int n : {0, 1, 4, 9}) {
      const double direct = projection_kernel(n, alpha, x, y);
      const double via = c * std::exp(-0.5 * r2) * normalized_kernel(n, alpha, ux, uy);
      EXPECT_NEAR(direct, via, 1e-10 * std::max(1.0, std::fabs(direct))) << n;
    }
  }
}

TEST(Radial, ZeroOrderProfileReproducesItself) {
  const AlphaVector alpha{0.5, 0.0};
  const double A = alpha.radial_type();
  RadialProfile prof{[&](double r) { return laguerre_fn_1d(0, A, r); }, alpha};
  EXPECT_NEAR(radial_coefficient(prof, 0, 40), 1.0, 1e-12);
  for (double r : {0.3, 1.0, 2.4}) EXPECT_NEAR(radial_project(prof, 0, r, 40), laguerre_fn_1d(0, A, r), 1e-12);
  EXPECT_NEAR(radial_project(prof, 3, 1.0, 40), 0.0, 1e-9);
}

TEST(Radial, AgreesWithTwoDimensionalPipeline) {
  const AlphaVector alpha{0.0, 0.0};
  const int N = 10;
  const auto c = expand(gaussian2, alpha, N, default_rule_order(N));
  RadialProfile prof{[](double r) { return std::exp(-0.5 * r * r); }, alpha};
  for (int n : {0, 1, 2, 5}) {
    for (double r : {0.5, 1.2, 2.0}) {
      for (double theta : {0.3, 0.8, 1.2}) {
        const std::vector<double> x{r * std::cos(theta), r * std::sin(theta)};
        const double full = degree_components(c, x)[n];
        EXPECT_NEAR(full, radial_project(prof, n, r, 60), 1e-6) << n << " " << r << " " << theta;
      }
    }
  }
}

TEST(Radial, ProjectionDependsOnlyOnNorm) {
  const AlphaVector alpha{0.5, 0.5, 0.0};
  const auto c = expand(gaussian2, alpha, 6, default_rule_order(6));
  const std::vector<double> p{1.0, 0.5, 0.6};
  const double r = std::sqrt(1.0 + 0.25 + 0.36);
  const std::vector<double> q{r / std::sqrt(3.0), r / std::sqrt(3.0), r / std::sqrt(3.0)};
  const auto a = degree_components(c, p);
  const auto b = degree_components(c, q);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(a[n], b[n], 1e-8) << n;
}

TEST(Simplex, DegreeZeroIsGammaRatio) {
  const AlphaVector alpha{0.5, 1.5};
  const std::vector<double> x{0.4, 0.7};
  const auto s = simplex_identity_check(0, alpha, x, 1.1);
  const double want = std::tgamma(1.5) * std::tgamma(2.5) / std::tgamma(4.0);
  EXPECT_NEAR(s.lhs, want, 1e-14);
  EXPECT_NEAR(s.rhs, want, 1e-14);
}

TEST(Simplex, DegreeThreeAgrees) {
  const AlphaVector alpha{0.5, 0.5};
  const std::vector<double> x{0.4, 0.7};
  const auto s = simplex_identity_check(3, alpha, x, 1.1);
  EXPECT_LT(std::fabs(s.lhs - s.rhs) / std::fabs(s.rhs), 1e-8);
  for (int n : {1, 6, 15}) {
    const auto t = simplex_identity_check(n, AlphaVector{-0.3, 2.0}, std::vector<double>{1.3, 0.2}, 2.5);
    EXPECT_LT(std::fabs(t.lhs - t.rhs), 1e-9 * std::max(1.0, std::fabs(t.rhs))) << n;
  }
}

TEST(Simplex, ThreeDimensionalStickBreaking) {
  const AlphaVector alpha{0.5, 0.0, 1.0};
  const std::vector<double> x{0.4, 0.7, 0.2};
  for (int n : {0, 2, 5}) {
    const auto t = simplex_identity_check(n, alpha, x, 1.3);
    EXPECT_LT(std::fabs(t.lhs - t.rhs), 1e-9 * std::max(1.0, std::fabs(t.rhs))) << n;
  }
}

TEST(CoefficientFile, RoundTripsBitExactly) {
  const AlphaVector alpha{0.1, 2.0 / 3.0};
  const auto c = expand([](auto x) { return (1.0 + x[1]) * gaussian2(x); }, alpha, 4, 20);
  std::stringstream ss;
  write_coefficients(ss, c);
  const auto back = read_coefficients(ss);
  EXPECT_TRUE(back.same_shape(c));
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back.value(i), c.value(i));
  std::stringstream bad("N=3\n");
  EXPECT_THROW(read_coefficients(bad), std::runtime_error);
}
