#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "experiments_radial.hpp"
#include "experiments_spectral.hpp"
#include "report.hpp"

namespace laguerre_riesz::lab {

struct ExperimentInfo {
  std::string name;
  std::string law;  // the relation the experiment measures
  std::function<ExperimentReport(const Config&, std::uint64_t)> run;
};

inline const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> table{
      {"local_mass_decay", "int_0^M phi_n^2 dmu ~ M n^{-1/2}", exp_local_mass_decay},
      {"trace_lower", "||phi_n^A||_{weak-2, omega} >= C n^{-1/4}", exp_trace_lower},
      {"norm_asymptotics", "||phi_n^A||_q ~ n^{(|alpha|+d)(1/q-1/2)}, 1 <= q <= 2", exp_norm_asymptotics},
      {"weighted_eigen", "int phi_n^2 (1+x)^beta >= C n^{beta/2}; (1+x)^{-beta}: >= C max(n^{-beta/2}, n^{-1/2})",
       exp_weighted_eigen},
      {"projection_growth", "||P_n f_n||_{weak-2} / ||f_n||_p ~ n^{(|alpha|+d)(1/2-1/p)-1/4}", exp_projection_growth},
      {"convergence_sweep", "S_R^lambda f -> f for lambda above lambda(alpha,p)/2", exp_convergence_sweep},
      {"square_function_scaling", "||S_delta f||_w^2 <= C delta^{3/2-beta/2} ||f||_w^2, w = (1+|x|)^{-beta}",
       exp_square_function_scaling},
      {"operator_inequalities", "||x^2 f||^2+||f''||^2+(2a+1)^2||f'/x||^2+2||x f'||^2 <= 3||L f||^2; ||L f|| >= e_0 ||f||",
       exp_operator_inequalities},
      {"weighted_smoothing", "||(1+x)^{2 beta} f|| <= C ||(1+L)^beta f||", exp_weighted_smoothing},
  };
  return table;
}

inline const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : experiments()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : experiments()) known += (known.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown experiment '" + name + "' (known: " + known + ")");
}

// Runs one experiment and stamps its wall time.
inline ExperimentReport run_experiment(const std::string& name, const Config& cfg, std::uint64_t seed,
                                       const std::string& tag = {}) {
  const auto& info = find_experiment(name);
  Stopwatch clock;
  ExperimentReport r = info.run(cfg, seed);
  r.tag = tag;
  r.runtime_seconds = clock.seconds();
  return r;
}

}  // namespace laguerre_riesz::lab
