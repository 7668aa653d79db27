#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "../expansion.hpp"
#include "../kernels.hpp"
#include "../measure.hpp"
#include "../summability.hpp"
#include "common.hpp"
#include "config.hpp"
#include "fitting.hpp"
#include "registry.hpp"
#include "report.hpp"

namespace laguerre_riesz::lab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
  std::vector<ExperimentReport> reports;
};

namespace internal {

inline std::string tag_of(const AlphaVector& a) {
  std::string s = "alpha=";
  for (std::size_t j = 0; j < a.dim(); ++j) s += (j ? "|" : "") + detail::format_g17(a[j]);
  return s;
}

// Orthonormality of all phi_mu with |mu| <= 12 on a tensor Gauss rule.
inline ExperimentReport orthonormality_report(const AlphaVector& alpha, int max_degree, std::uint64_t seed) {
  auto r = start_report("orthonormality", seed);
  r.tag = tag_of(alpha);
  const std::size_t d = alpha.dim();
  const int order = default_rule_order(max_degree);
  std::vector<QuadratureRule> rules;
  for (std::size_t j = 0; j < d; ++j) rules.push_back(build_rule(alpha[j], order));
  std::size_t points = 1;
  for (const auto& q : rules) points *= q.nodes.size();
  const SpectralCoefficients table(alpha, max_degree);
  Eigen::MatrixXd V(table.size(), points);
  std::vector<double> x(d);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const std::size_t i = rest % rules[j].nodes.size();
      rest /= rules[j].nodes.size();
      x[j] = rules[j].nodes[i];
      w *= rules[j].weights[i];
    }
    const double sw = std::sqrt(w);
    for (std::size_t k = 0; k < table.size(); ++k) V(k, p) = laguerre_fn_d(table.index(k), alpha, x) * sw;
  }
  const Eigen::MatrixXd gram = V * V.transpose();
  const double err = (gram - Eigen::MatrixXd::Identity(table.size(), table.size())).cwiseAbs().maxCoeff();
  r.add("max_gram_error", static_cast<double>(table.size()), err);
  r.params["alpha"] = join(alpha);
  record(r, "max_degree", max_degree);
  record(r, "rule_order", order);
  r.check("max |<phi_mu, phi_nu> - delta| < 1e-9", err < 1e-9, detail::format_g17(err));
  finalize_checks(r);
  return r;
}

inline ExperimentReport mehler_report(std::uint64_t seed) {
  auto r = start_report("mehler_identity", seed);
  const std::vector<double> as{-0.5, 0.0, 0.5, 2.0};
  const std::vector<double> zs{0.1, 0.4, 0.7};
  const std::vector<double> pts{0.0, 0.5, 1.0, 2.0, 5.0};
  double worst = 0.0;
  double worst_generating = 0.0;
  int index = 0;
  for (double a : as) {
    for (double z : zs) {
      for (double x : pts) {
        for (double y : pts) {
          // Lengthen the series until the geometric tail is negligible.
          MehlerCheck m;
          for (int N = 200;; N *= 2) {
            m = mehler_identity_check(a, z, x, y, N);
            if (m.tail_estimate <= 1e-14 * std::fabs(m.rhs) || N >= 6400) break;
          }
          const double rel = std::fabs(m.lhs - m.rhs) / std::fabs(m.rhs);
          worst = std::max(worst, rel);
          if (x == 0.0 || y == 0.0) worst_generating = std::max(worst_generating, rel);
          r.add("relative_error", index++, rel);
        }
      }
    }
  }
  r.params["a_list"] = "-0.5|0|0.5|2";
  r.params["z_list"] = "0.1|0.4|0.7";
  r.params["xy_list"] = "0|0.5|1|2|5";
  r.check("Mehler relative agreement < 1e-9", worst < 1e-9, detail::format_g17(worst));
  r.check("generating function (one argument 0) relative agreement < 1e-9", worst_generating < 1e-9,
          detail::format_g17(worst_generating));
  finalize_checks(r);
  return r;
}

inline std::vector<std::vector<double>> grid_points(std::size_t d, const std::vector<double>& coords) {
  std::vector<std::vector<double>> out;
  if (d == 1) {
    for (double c : coords) out.push_back({c});
  } else {
    for (double c1 : coords) {
      for (double c2 : coords) out.push_back({c1, c2});
    }
  }
  return out;
}

inline ExperimentReport heat_report(std::uint64_t seed) {
  auto r = start_report("heat_kernel", seed);
  const std::vector<AlphaVector> alphas{AlphaVector{0.0}, AlphaVector{0.5}, AlphaVector{-0.5}, AlphaVector{0.0, 0.5},
                                        AlphaVector{0.5, 0.5}};
  const std::vector<double> ts{0.1, 0.5, 1.0};
  const std::vector<double> coords{0.3, 0.9, 1.6, 2.4, 3.0};
  double worst = 0.0;
  int compared = 0;
  for (const auto& alpha : alphas) {
    const auto pts = grid_points(alpha.dim(), coords);
    for (double t : ts) {
      const HeatParams p{t, alpha};
      const int N = heat_series_degree(p);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
          double dist2 = 0.0;
          for (std::size_t k = 0; k < alpha.dim(); ++k) dist2 += std::pow(pts[i][k] - pts[j][k], 2);
          if (dist2 > 8.0 * t) continue;
          const double c = heat_kernel_closed(p, pts[i], pts[j]);
          const double s = heat_kernel_series(p, pts[i], pts[j], N);
          const double rel = std::fabs(s - c) / c;
          worst = std::max(worst, rel);
          r.add("series_relative_error", compared++, rel);
        }
      }
    }
  }
  // Semigroup K_t * K_s = K_{t+s} in d = 1 by composite Gauss-Legendre in z.
  double worst_semigroup = 0.0;
  const GaussRule rule = composite_gauss_legendre(0.0, 12.0, 0.25, 24);
  int composed_index = 0;
  for (double a : {0.0, 0.5}) {
    const AlphaVector alpha{a};
    for (auto [t, s] : {std::pair{0.1, 0.5}, std::pair{0.5, 0.5}, std::pair{1.0, 0.1}}) {
      for (auto [x, y] : {std::pair{0.3, 0.9}, std::pair{1.6, 2.4}, std::pair{0.9, 3.0}}) {
        const double composed = rule.integrate([&](double z) {
          return heat_kernel_closed({t, alpha}, std::vector<double>{x}, std::vector<double>{z}) *
                 heat_kernel_closed({s, alpha}, std::vector<double>{z}, std::vector<double>{y}) *
                 std::pow(z, 2.0 * a + 1.0);
        });
        const double direct = heat_kernel_closed({t + s, alpha}, std::vector<double>{x}, std::vector<double>{y});
        const double err = std::fabs(composed / direct - 1.0);
        worst_semigroup = std::max(worst_semigroup, err);
        r.add("semigroup_relative_error", composed_index++, err);
      }
    }
  }
  record(r, "pairs_compared", compared);
  r.check("closed form vs eigen-series relative error < 1e-8", worst < 1e-8, detail::format_g17(worst));
  r.check("semigroup composition error < 1e-7 (d = 1)", worst_semigroup < 1e-7, detail::format_g17(worst_semigroup));
  finalize_checks(r);
  return r;
}

inline SpectralCoefficients random_table(const AlphaVector& alpha, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralCoefficients c(alpha, N);
  for (std::size_t i = 0; i < c.size(); ++i) c.value(i) = normal(rng);
  return c;
}

inline ExperimentReport algebra_report(std::uint64_t seed) {
  auto r = start_report("riesz_cesaro_algebra", seed);
  auto rng = make_rng(seed, r.name);
  std::uniform_int_distribution<int> degree(1, 20);
  std::uniform_real_distribution<double> unit(0.05, 0.95);

  // lambda = 0 is the sharp spectral truncation, bit for bit.
  bool truncation_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    const AlphaVector alpha = trial % 2 ? AlphaVector{0.5} : AlphaVector{-0.5, 1.0};
    const int N = degree(rng);
    const auto c = random_table(alpha, N, rng);
    const int m = std::uniform_int_distribution<int>(0, N)(rng);
    const double e_lo = eigenvalue(m, alpha);
    const double R = std::sqrt(e_lo + 4.0 * unit(rng));  // strictly between e_m and e_{m+1}
    const auto mean = riesz_mean(c, {0.0, R});
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double want = c.degree(i) <= m ? c.value(i) : 0.0;
      truncation_exact = truncation_exact && mean.value(i) == want;
    }
  }
  r.check("lambda = 0 mean equals the partial sum exactly", truncation_exact);

  // A single eigenfunction is scaled by exactly (1 - e/R^2)_+^lambda.
  bool single_exact = true;
  for (int trial = 0; trial < 50; ++trial) {
    const AlphaVector alpha{0.25, 0.0};
    const int N = 8;
    const MultiIndex mu{trial % 5, (trial / 5) % 4};
    const double lambda = std::vector<double>{0.0, 0.5, 1.0, 2.5}[trial % 4];
    const double R = std::sqrt(eigenvalue(N, alpha)) * (0.5 + unit(rng));
    const auto mean = riesz_mean(SpectralCoefficients::unit(alpha, N, mu), {lambda, R});
    const double s = 1.0 - eigenvalue(mu.degree(), alpha) / (R * R);
    const double want = s <= 0.0 ? 0.0 : (lambda == 0.0 ? 1.0 : std::pow(s, lambda));
    for (std::size_t i = 0; i < mean.size(); ++i) {
      single_exact = single_exact && mean.value(i) == (mean.index(i) == mu ? want : 0.0);
    }
  }
  r.check("single eigenfunction multiplier values are exact", single_exact);

  // Refining the R grid can only raise the maximal function.
  bool monotone = true;
  double worst_drop = 0.0;
  const std::vector<std::vector<double>> xs{{0.2}, {0.7}, {1.3}, {2.1}, {3.4}};
  for (int table = 0; table < 100; ++table) {
    const AlphaVector alpha{table % 3 == 0 ? 0.0 : 0.5};
    const int N = degree(rng);
    const double lambda = std::vector<double>{0.0, 0.5, 1.0, 2.0}[table % 4];
    const auto c = random_table(alpha, N, rng);
    const GeometricGrid grid = default_riesz_grid(alpha, N);
    const auto coarse = maximal_riesz(c, lambda, grid, xs);
    const auto fine = maximal_riesz(c, lambda, grid.refined(), xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double drop = (coarse.values[i] - fine.values[i]) / std::max(coarse.values[i], 1e-300);
      worst_drop = std::max(worst_drop, drop);
      monotone = monotone && drop <= 1e-12;
    }
    r.add("maximal_riesz_refined_over_coarse", table, fine.values[2] / coarse.values[2]);
  }
  r.check("maximal Riesz is monotone under grid refinement on 100 tables", monotone, detail::format_g17(worst_drop));
  finalize_checks(r);
  return r;
}

inline bool all_pass(const std::vector<ExperimentReport>& reports, std::string& detail) {
  bool ok = true;
  for (const auto& r : reports) {
    const bool this_ok = r.verdict == Verdict::pass && r.checks_passed();
    ok = ok && this_ok;
    if (!detail.empty()) detail += "; ";
    detail += (r.tag.empty() ? r.name : r.tag) + ": ";
    if (r.slope_experiment) {
      detail += "slope " + detail::format_g17(r.fitted_slope) + " vs " + detail::format_g17(r.expected_slope);
    } else {
      detail += to_string(r.verdict);
    }
    for (const auto& c : r.checks) {
      if (!c.passed) detail += " [failed: " + c.name + " " + c.detail + "]";
    }
  }
  return ok;
}

inline ExperimentReport tagged(const std::string& name, const Config& cfg, std::uint64_t seed, const std::string& tag) {
  return run_experiment(name, cfg, seed, tag);
}

}  // namespace internal

struct CriterionSpec {
  int id;
  std::string title;
  double time_limit;
  std::function<std::vector<ExperimentReport>(std::uint64_t)> run;
};

inline const std::vector<CriterionSpec>& acceptance_criteria() {
  using namespace internal;
  static const std::vector<CriterionSpec> table{
      {1, "orthonormality", 60.0,
       [](std::uint64_t seed) {
         std::vector<ExperimentReport> out;
         for (const auto& a : {AlphaVector{0.0}, AlphaVector{0.5}, AlphaVector{-0.5, 0.5}, AlphaVector{2.0, 2.0}}) {
           out.push_back(orthonormality_report(a, 12, seed));
         }
         return out;
       }},
      {2, "generating function and Mehler identities", 30.0,
       [](std::uint64_t seed) { return std::vector<ExperimentReport>{mehler_report(seed)}; }},
      {3, "heat kernel closed form vs eigen-series", 120.0,
       [](std::uint64_t seed) { return std::vector<ExperimentReport>{heat_report(seed)}; }},
      {4, "local mass decay", 120.0,
       [](std::uint64_t seed) {
         return std::vector<ExperimentReport>{tagged("local_mass_decay", {{"alpha", "0"}}, seed, "alpha=0"),
                                              tagged("local_mass_decay", {{"alpha", "0.5"}}, seed, "alpha=0.5")};
       }},
      {5, "trace lower bound", 180.0,
       [](std::uint64_t seed) {
         return std::vector<ExperimentReport>{tagged("trace_lower", {{"alpha", "0"}}, seed, "alpha=0"),
                                              tagged("trace_lower", {{"alpha", "0.5"}}, seed, "alpha=0.5")};
       }},
      {6, "norm asymptotics", 300.0,
       [](std::uint64_t seed) {
         return std::vector<ExperimentReport>{
             tagged("norm_asymptotics", {{"alpha", "0"}, {"q", "1"}}, seed, "alpha=0 q=1"),
             tagged("norm_asymptotics", {{"alpha", "0.5"}, {"q", "1.5"}}, seed, "alpha=0.5 q=1.5"),
             tagged("norm_asymptotics", {{"alpha", "0.5,0.5"}, {"q", "1.3333333333333333"}}, seed,
                    "alpha=0.5|0.5 q=4/3")};
       }},
      {7, "weighted eigenfunction norms", 180.0,
       [](std::uint64_t seed) {
         std::vector<ExperimentReport> out;
         for (auto [sign, beta] : {std::pair{"+", "0.5"}, std::pair{"+", "1"}, std::pair{"-", "0.5"}, std::pair{"-", "2"}}) {
           out.push_back(tagged("weighted_eigen", {{"alpha", "0.5"}, {"sign", sign}, {"beta", beta}}, seed,
                                std::string("sign=") + sign + " beta=" + beta));
         }
         return out;
       }},
      {8, "Riesz and Cesaro algebra", 30.0,
       [](std::uint64_t seed) { return std::vector<ExperimentReport>{algebra_report(seed)}; }},
      {9, "square-function one-sided scaling", 900.0,
       [](std::uint64_t seed) {
         std::vector<ExperimentReport> out;
         for (const char* a : {"0.25", "0.5"}) {
           for (const char* b : {"1.25", "1.4"}) {
             out.push_back(tagged("square_function_scaling", {{"alpha", a}, {"beta", b}}, seed,
                                  std::string("alpha=") + a + " beta=" + b));
           }
         }
         return out;
       }},
      {10, "operator inequalities", 60.0,
       [](std::uint64_t seed) {
         std::vector<ExperimentReport> out;
         for (const char* a : {"-0.5", "0", "0.5", "2"}) {
           out.push_back(tagged("operator_inequalities", {{"alpha", a}}, seed, std::string("alpha=") + a));
         }
         return out;
       }},
  };
  return table;
}

// Runs criteria 1-10 (or the listed subset). Determinism of the CLI output is
// checked separately, since it needs two processes.
inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& only = {}) {
  std::vector<CriterionResult> out;
  for (const auto& crit : acceptance_criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), crit.id) == only.end()) continue;
    CriterionResult res;
    res.id = crit.id;
    res.title = crit.title;
    res.time_limit = crit.time_limit;
    Stopwatch clock;
    try {
      res.reports = crit.run(seed);
      res.seconds = clock.seconds();
      for (auto& r : res.reports) {
        if (r.runtime_seconds == 0.0) r.runtime_seconds = res.seconds / static_cast<double>(res.reports.size());
      }
      res.passed = internal::all_pass(res.reports, res.detail);
    } catch (const std::exception& e) {
      res.seconds = clock.seconds();
      res.passed = false;
      res.detail = std::string("error: ") + e.what();
    }
    if (res.seconds > res.time_limit) {
      res.passed = false;
      res.detail += "; over time limit " + detail::format_g17(res.time_limit) + " s";
    }
    out.push_back(std::move(res));
  }
  return out;
}

inline nlohmann::json to_json(const CriterionResult& c, bool with_runtime = true) {
  nlohmann::json j{{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail},
                   {"time_limit_seconds", c.time_limit}};
  if (with_runtime) j["runtime_seconds"] = c.seconds;
  return j;
}

}  // namespace laguerre_riesz::lab
