#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "laguerre_riesz/lab/lab.hpp"

using namespace laguerre_riesz;
using namespace laguerre_riesz::lab;

namespace {

ExperimentReport power_law_report(double exponent, std::vector<double> xs) {
  ExperimentReport r;
  r.name = "synthetic";
  r.seed = 3;
  for (double x : xs) r.add("y", x, 2.0 * std::pow(x, exponent) * (1.0 + 0.01 * std::sin(x)), true);
  return r;
}

std::vector<double> geometric(double lo, double ratio, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(ratio, i));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

TEST(Config, ParsesCommentsListsAndOverrides) {
  std::istringstream in("# header\nalpha = 0.5, 0.5\n  q=1.5   # trailing\n\nn_list = 64,128 ,256\nname = trace\n");
  Config c = Config::parse(in);
  EXPECT_EQ(c.get_string("name", ""), "trace");
  EXPECT_DOUBLE_EQ(c.get_double("q", 0.0), 1.5);
  EXPECT_EQ(c.get_alpha("alpha", AlphaVector{0.0}), (AlphaVector{0.5, 0.5}));
  EXPECT_EQ(c.get_int_list("n_list", {}), (std::vector<int>{64, 128, 256}));
  EXPECT_EQ(c.get_int("missing", 9), 9);
  c.apply_assignment("q = 2");
  EXPECT_DOUBLE_EQ(c.get_double("q", 0.0), 2.0);
  Config other{{"q", "1"}, {"extra", "x"}};
  c.merge(other);
  EXPECT_DOUBLE_EQ(c.get_double("q", 0.0), 1.0);
  EXPECT_TRUE(c.has("extra"));

  std::ostringstream out;
  c.write(out);
  std::istringstream back(out.str());
  EXPECT_EQ(Config::parse(back).entries(), c.entries());
}

TEST(Config, RejectsMalformedInput) {
  std::istringstream bad("alpha 0.5\n");
  EXPECT_THROW(Config::parse(bad), std::runtime_error);
  Config c{{"q", "abc"}, {"n", "2.5"}, {"empty", " , "}};
  EXPECT_THROW(c.get_double("q", 0.0), std::invalid_argument);
  EXPECT_THROW(c.get_int("n", 0), std::invalid_argument);
  EXPECT_THROW(c.get_list("empty", {}), std::invalid_argument);
  EXPECT_THROW(c.apply_assignment("novalue"), std::invalid_argument);
  EXPECT_THROW(c.raw("absent"), std::out_of_range);
  EXPECT_THROW(Config::load("/nonexistent/config.txt"), std::runtime_error);
}

// ---------------------------------------------------------------------------
// Fitting and verdicts

TEST(Fitting, OlsRecoversExactLine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 5.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 - 0.75 * v);
  const LineFit f = ols(x, y);
  EXPECT_NEAR(f.slope, -0.75, 1e-15);
  EXPECT_NEAR(f.intercept, 3.0, 1e-15);
  EXPECT_THROW(ols(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(Fitting, BootstrapIsSeededAndReproducible) {
  const auto xs = geometric(10.0, 1.6, 10);
  std::vector<double> ys;
  std::mt19937_64 noise(5);
  std::normal_distribution<double> eps(0.0, 0.05);
  for (double x : xs) ys.push_back(std::pow(x, -0.5) * std::exp(eps(noise)));
  const SlopeFit a = fit_loglog(xs, ys, 11, "stream");
  const SlopeFit b = fit_loglog(xs, ys, 11, "stream");
  const SlopeFit c = fit_loglog(xs, ys, 12, "stream");
  EXPECT_EQ(a.stderr_bootstrap, b.stderr_bootstrap);
  EXPECT_NE(a.stderr_bootstrap, c.stderr_bootstrap);
  EXPECT_EQ(a.slope, c.slope);
  EXPECT_EQ(a.resamples, 200);
  EXPECT_GT(a.stderr_bootstrap, 0.0);
  EXPECT_LT(a.stderr_bootstrap, 0.1);
  EXPECT_NEAR(a.slope, -0.5, 0.1);
  EXPECT_THROW(fit_loglog(xs, ys, 1, "s", 100), std::invalid_argument);
  EXPECT_THROW(fit_loglog(std::vector<double>{1.0, -2.0}, std::vector<double>{1.0, 1.0}, 1, "s"), std::domain_error);
}

TEST(Fitting, ExactPowerLawHasZeroSpread) {
  const auto xs = geometric(1.0, 2.0, 8);
  std::vector<double> ys;
  for (double x : xs) ys.push_back(5.0 * std::pow(x, 0.375));
  const SlopeFit f = fit_loglog(xs, ys, 1, "exact");
  EXPECT_NEAR(f.slope, 0.375, 1e-13);
  EXPECT_LT(f.stderr_bootstrap, 1e-12);
  EXPECT_NEAR(f.decades, 7.0 * std::log10(2.0), 1e-12);
}

TEST(Verdict, SlopeRuleAndTolerance) {
  auto r = power_law_report(-0.5, geometric(64.0, std::sqrt(2.0), 11));
  finalize_slope(r, -0.5, 0.1);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(std::isfinite(r.slope_stderr));
  EXPECT_EQ(r.tolerance, 0.1);

  auto far = power_law_report(-0.5, geometric(64.0, std::sqrt(2.0), 11));
  finalize_slope(far, -0.25, 0.08);
  EXPECT_EQ(far.verdict, Verdict::fail);
  EXPECT_EQ(std::fabs(far.fitted_slope - far.expected_slope) <= far.tolerance, far.verdict == Verdict::pass);
}

TEST(Verdict, InconclusiveBelowSixPointsOrShortSpan) {
  auto few = power_law_report(-0.5, geometric(10.0, 3.0, 5));
  finalize_slope(few, -0.5, 0.1);
  EXPECT_EQ(few.verdict, Verdict::inconclusive);

  auto narrow = power_law_report(-0.5, geometric(100.0, 1.5, 7));  // about 1.06 decades
  finalize_slope(narrow, -0.5, 0.1);
  EXPECT_EQ(narrow.verdict, Verdict::inconclusive);
  EXPECT_FALSE(narrow.notes.empty());

  ExperimentReport empty;
  empty.name = "empty";
  EXPECT_THROW(finalize_slope(empty, 0.0, 0.1), std::logic_error);
  EXPECT_THROW(finalize_checks(empty), std::logic_error);
}

TEST(Verdict, CheckExperimentsFollowTheirChecks) {
  ExperimentReport r;
  r.name = "checks";
  r.add("v", 1.0, 1.0);
  r.check("first", true);
  finalize_checks(r);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_FALSE(r.slope_experiment);
  r.check("second", false);
  finalize_checks(r);
  EXPECT_EQ(r.verdict, Verdict::fail);
}

// ---------------------------------------------------------------------------
// Reports and output

TEST(Report, JsonCarriesEveryFieldAndNullsNaN) {
  auto r = power_law_report(-0.5, geometric(64.0, std::sqrt(2.0), 11));
  r.params["alpha"] = "0";
  finalize_slope(r, -0.5, 0.1);
  r.runtime_seconds = 1.5;
  const auto j = to_json(r);
  for (const char* key : {"name", "tag", "params", "samples", "fitted_slope", "slope_stderr", "expected_slope", "tolerance",
                          "verdict", "runtime_seconds", "seed", "checks", "notes"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_FALSE(to_json(r, false).contains("runtime_seconds"));

  ExperimentReport blank;
  blank.name = "blank";
  blank.add("s", 1.0, std::nan(""));
  const auto jb = to_json(blank);
  EXPECT_TRUE(jb["fitted_slope"].is_null());
  EXPECT_TRUE(jb["samples"][0]["value"].is_null());
}

TEST(Report, SamplesCsvHasHeaderAndNoTiming) {
  ExperimentReport r;
  r.name = "exp";
  r.tag = "alpha=0";
  r.add("mass", 64.0, 0.125, true);
  r.runtime_seconds = 3.0;
  EXPECT_EQ(samples_csv({r}), "experiment,tag,series,abscissa,value,in_fit\nexp,alpha=0,mass,64,0.125,1\n");
  r.runtime_seconds = 9.0;
  EXPECT_EQ(samples_csv({r}), "experiment,tag,series,abscissa,value,in_fit\nexp,alpha=0,mass,64,0.125,1\n");
}

TEST(Output, RunDirectoriesAreUniqueAndWritesAtomic) {
  const auto base = std::filesystem::temp_directory_path() / "laguerre_riesz_test_output";
  std::filesystem::remove_all(base);
  const auto a = make_run_dir(base, "demo");
  const auto b = make_run_dir(base, "demo");
  EXPECT_NE(a, b);
  EXPECT_TRUE(std::filesystem::is_directory(a));
  EXPECT_TRUE(std::filesystem::is_directory(b));

  ExperimentReport r;
  r.name = "exp";
  r.add("s", 1.0, 2.0);
  write_run(a, to_json(r), {r}, Config{{"seed", "7"}});
  for (const char* f : {"report.json", "samples.csv", "config.txt"}) {
    EXPECT_TRUE(std::filesystem::exists(a / f)) << f;
    EXPECT_FALSE(std::filesystem::exists(a / (std::string(f) + ".tmp"))) << f;
  }
  std::ifstream cfg(a / "config.txt");
  std::string line;
  std::getline(cfg, line);
  EXPECT_EQ(line, "seed = 7");
  std::filesystem::remove_all(base);
}

// ---------------------------------------------------------------------------
// Radial tools

TEST(Radial, ProfilesMatchPointEvaluation) {
  const std::vector<int> ns{0, 7, 64, 7, 300};
  const std::vector<double> xs{0.0, 0.3, 1.7, 9.5, 21.0};
  for (double A : {-0.5, 0.0, 1.5}) {
    const auto table = phi_profiles(ns, A, xs);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t k = 0; k < xs.size(); ++k) {
        const double want = laguerre_fn_1d(ns[i], A, xs[k]);
        EXPECT_NEAR(table[i][k], want, 1e-13 * std::max(1.0, std::fabs(want))) << A << " " << ns[i] << " " << xs[k];
      }
    }
  }
  EXPECT_THROW(phi_profiles({}, 0.0, xs), std::invalid_argument);
  EXPECT_THROW(phi_profiles({-1}, 0.0, xs), std::invalid_argument);
}

TEST(Radial, CutoffCapturesTheMass) {
  for (int n : {16, 256, 2048}) {
    for (double A : {0.0, 2.0}) {
      const double hi = radial_cutoff(n, A, 2.0);
      const GaussRule rule = radial_rule(0.0, hi, n, A);
      const auto m = radial_measure(rule, A, [](double) { return 1.0; });
      const auto phi = phi_profiles({n}, A, rule.nodes);
      EXPECT_NEAR(lq_integral(phi[0], m, 2.0), 1.0, 1e-11) << n << " " << A;
      EXPECT_LT(std::fabs(laguerre_fn_1d(n, A, hi)), 1e-14);
    }
  }
}

TEST(Radial, GeometricDegrees) {
  const auto ns = geometric_degrees(64, 2048, 2);
  EXPECT_EQ(ns.size(), 11u);
  EXPECT_EQ(ns.front(), 64);
  EXPECT_EQ(ns.back(), 2048);
  EXPECT_EQ(ns[1], 91);
  EXPECT_TRUE(std::is_sorted(ns.begin(), ns.end()));
  EXPECT_THROW(geometric_degrees(0, 10, 2), std::invalid_argument);
}

TEST(WeakNorm, IndicatorAndStepFunctions) {
  // |f| = 1 on mass 4: sup_delta delta m^{1/2} = 2 at delta = 1.
  const std::vector<double> one(4, 1.0);
  const std::vector<double> unit_mass(4, 1.0);
  const WeakNorm w = weak_l2_norm(one, unit_mass);
  EXPECT_DOUBLE_EQ(w.value, 2.0);
  EXPECT_DOUBLE_EQ(w.exact_sup, 2.0);

  // Levels 3, 2, 1 on masses 1, 3, 12: candidates 3*1, 2*2, 1*4; sup 4 at delta = 2 or 1.
  const std::vector<double> f{3.0, -2.0, 1.0};
  const std::vector<double> m{1.0, 3.0, 12.0};
  const WeakNorm s = weak_l2_norm(f, m, 64, 2.0);
  EXPECT_DOUBLE_EQ(s.exact_sup, 4.0);
  EXPECT_LE(s.value, 4.0 + 1e-12);
  EXPECT_GE(s.value, 4.0 / std::pow(10.0, 2.0 / 64.0));  // within one rung
  EXPECT_GE(s.refined, s.value);

  const std::vector<double> zeros(3, 0.0);
  EXPECT_EQ(weak_l2_norm(zeros, m).value, 0.0);
  EXPECT_THROW(weak_l2_norm(f, unit_mass), std::invalid_argument);
}

TEST(WeakNorm, LadderTracksSampleSupOnEigenfunctions) {
  const GaussRule rule = composite_gauss_legendre(0.5, 1.0, 0.0005, 16);
  const auto m = radial_measure(rule, 0.0, [](double) { return 1.0; });
  const auto phi = phi_profiles({100, 400}, 0.0, rule.nodes);
  for (const auto& f : phi) {
    const WeakNorm w = weak_l2_norm(f, m);
    EXPECT_LE(w.value, w.exact_sup * (1.0 + 1e-12));
    EXPECT_GT(w.value, 0.97 * w.exact_sup);
  }
}

// ---------------------------------------------------------------------------
// Sharpness family

TEST(Sharpness, FamiliesAndValidation) {
  const AlphaVector alpha{0.5, 0.0};
  const std::vector<double> x{0.6, 0.8};
  SharpnessFamily f{SharpnessFamily::Kind::f_n, 5, 3.0, 0.0, alpha};
  const double phi = laguerre_fn_1d(5, alpha.radial_type(), 1.0);
  EXPECT_NEAR(f(x), std::copysign(std::sqrt(std::fabs(phi)), phi), 1e-14);

  SharpnessFamily g{SharpnessFamily::Kind::g_n, 4, 2.0, 0.0, alpha};
  const double gv = laguerre_fn_1d(4, 0.5, 0.6) * laguerre_fn_1d(0, 0.0, 0.8);
  EXPECT_NEAR(g(x), gv, 1e-14);
  SharpnessFamily G{SharpnessFamily::Kind::G_n, 4, 2.0, 1.5, alpha};
  EXPECT_NEAR(G(x), gv * std::pow(2.0, -1.5), 1e-14);

  EXPECT_THROW((SharpnessFamily{SharpnessFamily::Kind::f_n, 1, 1.0, 0.0, alpha}.validate()), std::domain_error);
  EXPECT_THROW((SharpnessFamily{SharpnessFamily::Kind::G_n, 1, 2.0, -1.0, alpha}.validate()), std::domain_error);
  EXPECT_THROW(g(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_EQ(SharpnessFamily::radial_power(0.0, 4.0), 0.0);
}

// ---------------------------------------------------------------------------
// Square function: Gram path against the pointwise definition

TEST(SquareFunction, GramPathMatchesPointwiseIntegral) {
  const double a = 0.5;
  const double beta = 1.25;
  const int N = 24;
  const double delta = 0.25;
  const AlphaVector alpha{a};
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(N + 1);
  SpectralCoefficients table(alpha, N);
  for (int n = 0; n <= N; ++n) {
    c[n] = normal(rng);
    table.value(n) = c[n];
  }
  const BumpFunction bump = default_bump();
  const LogGrid grid = default_t_grid(alpha, N, delta, bump, 32);
  const double gram = internal::square_energy_gram(c, internal::weighted_gram(a, N, beta), alpha, delta, bump, grid);

  const GaussRule rule = radial_rule(0.0, radial_cutoff(N, a, 2.0), N, a);
  const auto m = radial_measure(rule, a, [&](double x) { return std::pow(1.0 + x, -beta); });
  double pointwise = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double x[] = {rule.nodes[k]};
    const double s = square_function(table, delta, bump, x, grid);
    pointwise += m[k] * s * s;
  }
  EXPECT_NEAR(gram / pointwise, 1.0, 1e-10);
}

TEST(SquareFunction, GramMatrixIsSymmetricPositive) {
  const Eigen::MatrixXd G = internal::weighted_gram(0.25, 16, 1.4);
  EXPECT_LT((G - G.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_LT(es.eigenvalues().maxCoeff(), 1.0);  // (1+x)^{-beta} <= 1
}

// ---------------------------------------------------------------------------
// Operator inequality terms

TEST(OperatorTerms, PhiZeroClosedFormAndRandomConsistency) {
  for (double a : {-0.5, 0.0, 0.5, 2.0}) {
    const auto t = internal::operator_terms(a, {1.0}, 40);
    const double m1 = a + 1.0;
    const double m2 = (a + 1.0) * (a + 2.0);
    EXPECT_NEAR(t.lhs, 4.0 * m2 - 2.0 * m1 + 1.0 + (2.0 * a + 1.0) * (2.0 * a + 1.0), 1e-12 * t.lhs);
    EXPECT_NEAR(t.direct, std::pow(2.0 * a + 2.0, 2), 1e-12 * t.direct);
  }
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(13);
  for (double& v : c) v = normal(rng);
  const auto t = internal::operator_terms(0.3, c, 40);
  EXPECT_NEAR(t.direct / t.spectral, 1.0, 1e-11);
  EXPECT_LE(t.lhs, 3.0 * t.spectral);
}

TEST(OperatorTerms, InequalityFailsBelowMinusOneHalf) {
  const auto r = exp_operator_inequalities(Config{{"alpha", "-0.75"}, {"random_count", "5"}}, 1);
  EXPECT_EQ(r.verdict, Verdict::fail);
}

// ---------------------------------------------------------------------------
// Experiments and registry

TEST(Registry, NamesAreUniqueAndLookupFails) {
  std::set<std::string> names;
  for (const auto& e : experiments()) {
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
    EXPECT_FALSE(e.law.empty());
  }
  EXPECT_EQ(names.size(), 9u);
  EXPECT_THROW(find_experiment("nope"), std::invalid_argument);
}

TEST(Experiments, RunsAreDeterministic) {
  const Config cfg{{"n_list", "16,32,64,128,256,512"}};
  const auto a = run_experiment("trace_lower", cfg, 7);
  const auto b = run_experiment("trace_lower", cfg, 7);
  EXPECT_EQ(samples_csv({a}), samples_csv({b}));
  EXPECT_EQ(a.slope_stderr, b.slope_stderr);
  EXPECT_GT(a.runtime_seconds, 0.0);
  const auto c = run_experiment("operator_inequalities", Config{{"random_count", "8"}}, 7);
  const auto d = run_experiment("operator_inequalities", Config{{"random_count", "8"}}, 7);
  EXPECT_EQ(samples_csv({c}), samples_csv({d}));
}

TEST(Experiments, ShortDegreeListsAreInconclusive) {
  const auto r = run_experiment("norm_asymptotics", Config{{"n_list", "64,128,256"}, {"q", "1"}}, 7);
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
  EXPECT_THROW(run_experiment("local_mass_decay", Config{{"n_list", "64,128,256"}}, 7), std::invalid_argument);
}

TEST(Experiments, PreconditionsAreEnforced) {
  EXPECT_THROW(exp_norm_asymptotics(Config{{"q", "2.5"}}, 1), std::domain_error);
  EXPECT_THROW(exp_weighted_eigen(Config{{"beta", "-1"}}, 1), std::domain_error);
  EXPECT_THROW(exp_weighted_eigen(Config{{"sign", "x"}}, 1), std::invalid_argument);
  EXPECT_THROW(exp_square_function_scaling(Config{{"beta", "0.9"}}, 1), std::domain_error);
  EXPECT_THROW(exp_trace_lower(Config{{"omega_lo", "0.7"}}, 1), std::invalid_argument);
  EXPECT_THROW(exp_local_mass_decay(Config{{"alpha", "0,0"}}, 1), std::invalid_argument);
  EXPECT_THROW(exp_projection_growth(Config{{"alpha", "-0.9"}}, 1), std::domain_error);
}

TEST(Experiments, WeightedEigenWithZeroBetaIsFlat) {
  const auto r = exp_weighted_eigen(Config{{"beta", "0"}, {"n_list", "8,16,32,64,128,256"}}, 1);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(r.checks_passed());
  for (const auto& s : r.samples) EXPECT_NEAR(s.value, 1.0, 1e-10);
}

TEST(Experiments, ProjectionGrowthBelowThresholdIsReportOnly) {
  // alpha = 0.5, d = 1: the sharpness range is p > 3.
  const auto r = exp_projection_growth(Config{{"p", "2.5"}, {"n_list", "16,32,64,128,256,512"}}, 1);
  EXPECT_EQ(r.verdict, Verdict::inconclusive);
  EXPECT_TRUE(r.checks_passed());
  EXPECT_EQ(r.samples.front().series, "ratio_degenerate");
}

TEST(Experiments, WeightedSmoothingBetaZero) {
  const auto r = exp_weighted_smoothing(Config{{"beta", "0"}, {"N_list", "16,32"}}, 2);
  EXPECT_EQ(r.verdict, Verdict::pass);
}

TEST(Experiments, ConvergenceSweepCoarse) {
  const auto r = exp_convergence_sweep(Config{{"N", "64"}, {"lambda_list", "1"}, {"target_error", "0.05"}}, 2);
  EXPECT_TRUE(r.checks_passed());
  std::size_t curve = 0;
  for (const auto& s : r.samples) curve += s.series == "lambda=1" ? 1 : 0;
  EXPECT_EQ(curve, 17u);
}

// ---------------------------------------------------------------------------
// Acceptance suite plumbing

TEST(Acceptance, FastCriteriaPass) {
  const auto results = run_acceptance(7, {1, 2, 3, 8});
  ASSERT_EQ(results.size(), 4u);
  for (const auto& c : results) {
    EXPECT_TRUE(c.passed) << c.id << " " << c.detail;
    EXPECT_FALSE(c.reports.empty());
    EXPECT_LT(c.seconds, c.time_limit);
  }
}
