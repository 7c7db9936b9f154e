// Command-line front end: adaptive or fixed solves and fixed-grid convergence studies.

#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rbfpum/harness.hpp"

using namespace rbfpum;

namespace {

constexpr int kConfigError = 1;
constexpr int kNumericalError = 2;

// CLI flag -> config key. Values are applied after the config file, so flags win.
const std::vector<std::pair<std::string, std::string>> kSettings = {
    {"--problem", "problem"},
    {"--mode", "mode"},
    {"--n-side", "n_side"},
    {"--epsilon", "epsilon"},
    {"--indicator", "indicator"},
    {"--tau-min", "tau_min"},
    {"--tau-max", "tau_max"},
    {"--test-multiplier", "test_multiplier"},
    {"--patches-per-axis", "patches_per_axis"},
    {"--overlap", "overlap"},
    {"--max-iterations", "max_iterations"},
    {"--max-points", "max_points"},
    {"--separation", "separation"},
    {"--add-spacing", "add_spacing"},
    {"--out", "out"},
};

struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool paper_stopping = false;
  bool fixed = false;
  bool no_iteration_files = false;
};

void add_settings(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "key = value file (flags override it)");
  for (const auto& [flag, key] : kSettings)
    cmd->add_option(flag, o.values[key]);
}

RunConfig build_config(const Overrides& o) {
  RunConfig c = o.config_file.empty() ? RunConfig{} : load_config(o.config_file);
  for (const auto& [key, value] : o.values)
    if (!value.empty())
      apply_setting(c, key, value);
  if (o.paper_stopping)
    c.stopping = StoppingRule::EmptyRemoval;
  if (o.fixed)
    c.adaptive = false;
  if (o.no_iteration_files)
    c.write_iterations = false;
  return c;
}

int run_solve(const Overrides& o) {
  const RunConfig config = build_config(o);
  const RunReport r = run(config);
  fmt::print("{:<8} {:>7} {:>10} {:>10} {:>10} {:>8}\n", "Poisson", "N_tot", "MAE", "RMSE", "CN",
             "time");
  fmt::print("{:<8} {:>7} {:>10.2e} {:>10.2e} {:>10.2e} {:>8.1f}\n", r.problem, r.n_total, r.mae,
             r.rmse, r.condition, r.seconds);
  fmt::print("iterations: {} ({})\n", r.iterations, r.stop_reason);
  if (!config.out_dir.empty())
    fmt::print("output: {}\n", config.out_dir.string());
  return 0;
}

int run_convergence(const Overrides& o, const std::vector<int>& sides) {
  const RunConfig config = build_config(o);
  const auto rows = convergence_study(config, sides);
  fmt::print("{:>6} {:>7} {:>5} {:>10} {:>10} {:>10} {:>8}\n", "side", "N", "ppa", "MAE", "RMSE",
             "CN", "time");
  for (const ConvergenceRow& r : rows)
    fmt::print("{:>6} {:>7} {:>5} {:>10.2e} {:>10.2e} {:>10.2e} {:>8.2f}\n", r.n_side, r.n_total,
               r.patches_per_axis, r.mae, r.rmse, r.condition, r.seconds);
  if (!config.out_dir.empty()) {
    std::filesystem::create_directories(config.out_dir);
    const auto path = config.out_dir / "convergence.csv";
    std::ofstream out(path);
    if (!out)
      throw Error(fmt::format("cannot open {} for writing", path.string()));
    out << "n_side,N,patches_per_axis,mae,rmse,cn,seconds\n";
    for (const ConvergenceRow& r : rows)
      out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.6f}\n", r.n_side, r.n_total,
                         r.patches_per_axis, r.mae, r.rmse, r.condition, r.seconds);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF partition-of-unity collocation for the Poisson problem on the unit square"};
  app.require_subcommand(1);

  Overrides solve_opts;
  CLI::App* solve = app.add_subcommand("solve", "adaptive (or fixed) solve of one problem");
  add_settings(solve, solve_opts);
  solve->add_flag("--paper-stopping", solve_opts.paper_stopping,
                  "stop as soon as nothing is removed");
  solve->add_flag("--fixed", solve_opts.fixed, "single solve on the initial set");
  solve->add_flag("--no-iteration-files", solve_opts.no_iteration_files,
                  "skip points_iter_<k>.csv");

  Overrides conv_opts;
  std::vector<int> sides{9, 17, 33};
  CLI::App* conv = app.add_subcommand("convergence", "fixed-grid solves at several resolutions");
  add_settings(conv, conv_opts);
  conv->add_option("--sides", sides, "grid sides, comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*solve)
      return run_solve(solve_opts);
    return run_convergence(conv_opts, sides);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kNumericalError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumericalError;
  }
}
