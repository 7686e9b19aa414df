// fdswipt: solve, sweep, certify and selftest commands.
//
// Exit codes: 0 success, 2 when a sweep point (or solve) has no feasible
// trial or a check fails, 1 on error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "fdswipt/harness.hpp"
#include "fdswipt/selftest.hpp"

namespace {

using namespace fdswipt;
using namespace fdswipt::harness;

int print_checks(const std::vector<Check>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    ok = ok && c.pass;
  }
  return ok ? 0 : 2;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text(out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-duplex SWIPT beamforming experiments"};
  app.require_subcommand(1);

  std::string config_path, out_path, method = "";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::uint64_t trial_index = 0;

  auto* solve = app.add_subcommand("solve", "Solve one realization and print it as JSON");
  solve->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_option("--trial", trial_index, "Trial index of the realization");
  solve->add_option("--method", method, "jbps, zf or both")->check(CLI::IsMember({"jbps", "zf", "both"}));
  solve->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--seed", seed, "Override the config seed");
  sweep->add_option("--trials", trials, "Override the trial count")->check(CLI::PositiveNumber);
  sweep->add_option("--method", method, "jbps, zf or both")->check(CLI::IsMember({"jbps", "zf", "both"}));
  sweep->add_option("--out", out_path, "CSV path (default: config output_path, else stdout)");

  std::string solution_path;
  auto* certify = app.add_subcommand("certify", "Re-check a saved solution");
  certify->add_option("solution", solution_path, "JSON written by solve")->required()->check(CLI::ExistingFile);

  auto* self = app.add_subcommand("selftest", "Run the built-in analytic and oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path, false);
      if (seed) cfg.seed = *seed;
      const auto methods = method.empty() ? cfg.methods : parse_methods(method);
      json result = json::array();
      bool all_feasible = true;
      for (Method m : methods) {
        const auto s = solve_joint(cfg.params, trial_index, cfg.seed, m, cfg.filter_noise);
        all_feasible = all_feasible && s.result.feasible;
        result.push_back(solution_to_json(s));
      }
      emit((methods.size() == 1 ? result[0] : result).dump(2) + "\n", out_path);
      return all_feasible ? 0 : 2;
    }
    if (*sweep) {
      ExperimentConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      if (trials) cfg.trials = *trials;
      if (!method.empty()) cfg.methods = parse_methods(method);
      if (!out_path.empty()) cfg.output_path = out_path;
      const auto res = run_sweep(cfg);
      emit(format_csv(res), cfg.output_path);
      for (const auto& r : res.rows) {
        if (r.trials == 0) {
          std::cerr << "no feasible trial at " << to_string(res.sweep_var) << " = " << r.value << " ("
                    << to_string(r.method) << ")\n";
        }
      }
      return res.any_infeasible_only() ? 2 : 0;
    }
    if (*certify) {
      std::ifstream in(solution_path);
      json j = json::parse(in);
      int code = 0;
      for (const auto& item : j.is_array() ? j : json::array({j})) {
        const auto s = solution_from_json(item);
        std::cout << to_string(s.method) << " seed " << s.seed << " trial " << s.trial << "\n";
        code = std::max(code, print_checks(certify_solution(s)));
      }
      return code;
    }
    if (*self) return print_checks(selftest::run());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
