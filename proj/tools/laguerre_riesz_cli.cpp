#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "laguerre_riesz/lab/acceptance.hpp"
#include "laguerre_riesz/lab/output.hpp"
#include "laguerre_riesz/lab/registry.hpp"
#include "laguerre_riesz/parallel.hpp"

namespace lab = laguerre_riesz::lab;

namespace {

int cmd_list() {
  for (const auto& e : lab::experiments()) std::cout << e.name << "\n    " << e.law << '\n';
  return 0;
}

int cmd_run(const std::string& name, const std::string& config_path, const std::vector<std::string>& sets,
            const std::string& out, std::uint64_t seed) {
  lab::Config cfg;
  if (!config_path.empty()) cfg = lab::Config::load(config_path);
  for (const auto& kv : sets) cfg.apply_assignment(kv);
  const auto report = lab::run_experiment(name, cfg, seed);

  lab::Config recorded = cfg;
  recorded.set("experiment", name);
  recorded.set("seed", std::to_string(seed));
  const auto dir = lab::make_run_dir(out, name);
  lab::write_run(dir, lab::to_json(report), {report}, recorded);

  std::cout << report.name << ": " << lab::to_string(report.verdict);
  if (report.slope_experiment) {
    std::cout << " (slope " << laguerre_riesz::detail::format_g17(report.fitted_slope) << " +- "
              << laguerre_riesz::detail::format_g17(report.slope_stderr) << ", expected "
              << laguerre_riesz::detail::format_g17(report.expected_slope) << " +- "
              << laguerre_riesz::detail::format_g17(report.tolerance) << ")";
  }
  std::cout << '\n';
  for (const auto& c : report.checks) std::cout << "  " << (c.passed ? "ok   " : "FAIL ") << c.name << ' ' << c.detail << '\n';
  for (const auto& n : report.notes) std::cout << "  note: " << n << '\n';
  std::cout << dir.string() << '\n';
  return report.verdict == lab::Verdict::fail || !report.checks_passed() ? 1 : 0;
}

int cmd_verify(const std::string& out, std::uint64_t seed) {
  const auto results = lab::run_acceptance(seed);
  nlohmann::json j;
  j["seed"] = seed;
  j["criteria"] = nlohmann::json::array();
  j["reports"] = nlohmann::json::array();
  std::vector<lab::ExperimentReport> reports;
  bool ok = true;
  for (const auto& c : results) {
    j["criteria"].push_back(lab::to_json(c));
    for (const auto& r : c.reports) {
      j["reports"].push_back(lab::to_json(r));
      reports.push_back(r);
    }
    ok = ok && c.passed;
    std::printf("%-4s criterion %2d  %-45s %8.2f s\n", c.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), c.seconds);
    if (!c.passed) std::cout << "      " << c.detail << '\n';
  }
  const lab::Config recorded{{"command", "verify"}, {"seed", std::to_string(seed)}};
  const auto dir = lab::make_run_dir(out, "verify");
  lab::write_run(dir, j, reports, recorded);
  std::cout << dir.string() << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laguerre expansion experiments"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: hardware concurrency)");

  std::string name;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out = "runs";
  std::uint64_t seed = 7;

  auto* run = app.add_subcommand("run", "run one experiment");
  run->add_option("experiment", name, "experiment name (see `list`)")->required();
  run->add_option("--config", config_path, "key = value settings file")->check(CLI::ExistingFile);
  run->add_option("--set", sets, "override one setting, key=value")->allow_extra_args(false);
  run->add_option("--out", out, "base directory for run output");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--threads", threads, "worker threads");

  auto* list = app.add_subcommand("list", "list experiments and the laws they measure");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--out", out, "base directory for run output");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) laguerre_riesz::set_worker_threads(threads);

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed()) return cmd_run(name, config_path, sets, out, seed);
    if (verify->parsed()) return cmd_verify(out, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
