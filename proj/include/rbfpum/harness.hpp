#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rbfpum/adaptivity.hpp"

namespace rbfpum {

struct RunConfig {
  std::string problem = "u1";
  InitialLayout layout = InitialLayout::Grid;
  int n_side = 11; ///< initial set: (n_side - 2)^2 interior points plus the boundary ring
  double epsilon = 3.0;
  bool adaptive = true; ///< false: a single solve on the initial set
  IndicatorKind indicator = IndicatorKind::InterpolantDisagreement;
  double tau_min = 1e-8;
  double tau_max = 1e-5;
  double test_multiplier = 2.0;
  std::size_t patches_per_axis = 0; ///< 0: chosen from N each iteration
  double overlap = 2.5;
  std::size_t max_iterations = 50;
  std::size_t max_points = 5000;
  double separation = 1e-4;
  double add_spacing = 5e-3;
  StoppingRule stopping = StoppingRule::NoChange;
  std::filesystem::path out_dir; ///< empty: write nothing
  bool write_iterations = true;  ///< points_iter_k.csv for every iteration
};

/// Sets one `key = value` entry. Throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Reads a flat `key = value` file; `#` starts a comment.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Throws ConfigError unless every numeric field is in range and tau_min < tau_max.
void validate(const RunConfig& config);

AmrsOptions amrs_options(const RunConfig& config);

struct RunReport {
  std::string problem;
  std::size_t n_total = 0;
  std::size_t n_interior = 0;
  std::size_t n_boundary = 0;
  double mae = 0.0;
  double rmse = 0.0;
  double condition = 0.0;
  std::size_t iterations = 0;
  std::string stop_reason;
  double seconds = 0.0;
};

/**
 * Runs the configured problem. With an output directory it writes
 * report.json, history.csv, points_final.csv, points_iter_<k>.csv and
 * solution_grid.csv. On a numerical failure history.csv is still written
 * before the exception propagates. `result_out` receives the final solution
 * and full history.
 */
RunReport run(const RunConfig& config, AmrsResult* result_out = nullptr);

/// `k,N_i,N_b,N_tot,added,removed,mae,rmse,cn,seconds,stop_reason`
void write_history_csv(const std::filesystem::path& path,
                       const std::vector<RefinementState>& history);

/// `x,y,u,exact,abs_error` on the 40 x 40 evaluation grid.
void write_solution_grid(const std::filesystem::path& path, const Solution& solution,
                         const PoissonProblem& problem);

/// report.json contents; everything except "timing" is reproducible bit for bit.
std::string report_json(const RunReport& report, const RunConfig& config);

struct ConvergenceRow {
  int n_side = 0;
  std::size_t n_total = 0;
  std::size_t patches_per_axis = 0;
  double mae = 0.0;
  double rmse = 0.0;
  double condition = 0.0;
  double seconds = 0.0;
};

/// Non-adaptive solves on n_side x n_side grids.
std::vector<ConvergenceRow> convergence_study(const RunConfig& config, const std::vector<int>& sides);

} // namespace rbfpum
