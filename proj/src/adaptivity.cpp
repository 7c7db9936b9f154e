#include "rbfpum/adaptivity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "rbfpum/metrics.hpp"
#include "rbfpum/pum_weights.hpp"

namespace rbfpum {

const char* to_string(StopReason reason) {
  switch (reason) {
  case StopReason::None:
    return "";
  case StopReason::Converged:
    return "converged";
  case StopReason::MaxIterations:
    return "max_iterations";
  case StopReason::MaxPoints:
    return "max_points";
  }
  return "";
}

Eigen::VectorXd indicator_interpolant(const Solution& solution, std::span<const Point> test_points) {
  const Covering& covering = solution.disc->covering;
  Eigen::VectorXd e(static_cast<Eigen::Index>(test_points.size()));
  for (std::size_t t = 0; t < test_points.size(); ++t) {
    const Point& y = test_points[t];
    const WeightEvaluation we = evaluate_weights(y, covering);
    double best = std::numeric_limits<double>::infinity();
    double blended = 0.0, local = 0.0;
    for (std::size_t a = 0; a < we.active.size(); ++a) {
      const double v = solution.local_value(we.active[a], y);
      blended += we.values[a] * v;
      const double d2 = (covering[we.active[a]].center - y).squaredNorm();
      if (d2 < best) {
        best = d2;
        local = v;
      }
    }
    e(static_cast<Eigen::Index>(t)) = std::abs(blended - local);
  }
  return e;
}

namespace {

double boundary_distance(const Point& p) {
  return std::min({p.x(), p.y(), 1.0 - p.x(), 1.0 - p.y()});
}

double query_cell(std::size_t n, double separation) {
  return std::max(separation, 1.0 / std::max(1.0, std::sqrt(static_cast<double>(n))));
}

/// Keeps candidates that are strictly inside the square, at least `separation`
/// from the boundary, from every existing point, and from each other.
std::vector<Point> separate(std::span<const Point> candidates, std::span<const Point> existing,
                            double separation) {
  const PointGrid grid(existing, query_cell(existing.size(), separation));
  std::vector<Point> accepted;
  for (const Point& c : candidates) {
    if (boundary_distance(c) < separation)
      continue;
    if (!existing.empty() && grid.nearest(c).second < separation)
      continue;
    const bool clash = std::any_of(accepted.begin(), accepted.end(), [&](const Point& a) {
      return (a - c).norm() < separation;
    });
    if (!clash)
      accepted.push_back(c);
  }
  return accepted;
}

} // namespace

PointSet make_fine_set(const PointSet& coarse, HaltonStream& halton, std::size_t extra,
                       double separation) {
  const std::vector<Point> candidates = halton.draw(extra);
  const std::vector<Point> existing = coarse.all();
  PointSet fine = coarse;
  for (const Point& p : separate(candidates, existing, separation))
    fine.interior.push_back(p);
  return fine;
}

Eigen::VectorXd coarse_fine_difference(const PoissonProblem& problem, const PointSet& coarse,
                                       const PointSet& fine, const KernelModel& kernel,
                                       const DiscretizationOptions& options,
                                       std::span<const Point> at) {
  auto solve_on = [&](const PointSet& set) {
    auto disc = discretize(set, kernel, options);
    const GlobalSystem system = assemble_global(*disc, problem);
    return solve(std::move(disc), system);
  };
  const Solution coarse_solution = solve_on(coarse);
  const Solution fine_solution = solve_on(fine);
  return (evaluate(fine_solution, at) - evaluate(coarse_solution, at)).cwiseAbs();
}

Eigen::VectorXd indicator_coarse_fine(const PoissonProblem& problem, const PointSet& coarse,
                                      const PointSet& fine, const KernelModel& kernel,
                                      const DiscretizationOptions& options) {
  const std::vector<Point> at = coarse.all();
  return coarse_fine_difference(problem, coarse, fine, kernel, options, at);
}

AmrsResult amrs_run(const PoissonProblem& problem, const AmrsOptions& options, PointSet initial,
                    HaltonStream& halton, std::vector<RefinementState>* history_out) {
  const IndicatorConfig& ind = options.indicator;
  if (!(ind.tau_min >= 0.0) || !(ind.tau_min < ind.tau_max))
    throw ConfigError("indicator thresholds must satisfy 0 <= tau_min < tau_max");
  if (!(ind.test_multiplier > 0.0))
    throw ConfigError("test_multiplier must be positive");
  if (options.max_iterations < 1 || options.max_points < 1)
    throw ConfigError("iteration and point limits must be positive");

  std::vector<RefinementState> local_history;
  std::vector<RefinementState>& history = history_out ? *history_out : local_history;
  history.clear();

  PointSet points = std::move(initial);
  std::vector<bool> fresh(points.num_interior(), false); // added by the previous update
  AmrsResult result;

  for (std::size_t k = 1;; ++k) {
    const auto start = std::chrono::steady_clock::now();
    RefinementState state;
    state.k = k;
    state.points = points;

    auto disc = discretize(points, options.kernel, options.discretization);
    state.patches_per_axis = disc->covering.patches_per_axis();
    const GlobalSystem system = assemble_global(*disc, problem);
    const SparseFactorization factorization(system.L);
    Solution solution = make_solution(disc, solve_nodal(system, factorization));
    state.condition = estimate_condition(system.L, factorization);
    if (problem.has_exact()) {
      const ErrorNorms err = compute_errors(solution, problem);
      state.mae = err.mae;
      state.rmse = err.rmse;
    }

    // Estimate.
    const auto n_test = static_cast<std::size_t>(
        std::ceil(ind.test_multiplier * static_cast<double>(points.num_interior())));
    Eigen::VectorXd error;
    if (ind.kind == IndicatorKind::InterpolantDisagreement) {
      state.test = halton.draw(n_test);
      error = indicator_interpolant(solution, state.test);
    } else {
      state.test = halton.draw(n_test);
      const PointSet fine = make_fine_set(points, halton, points.num_interior(),
                                          std::max(options.separation, options.add_spacing));
      error = coarse_fine_difference(problem, points, fine, options.kernel,
                                     options.discretization, state.test);
    }
    state.max_indicator = error.size() > 0 ? error.maxCoeff() : 0.0;

    // Mark.
    std::vector<Point> over;
    std::vector<Point> under;
    for (std::size_t t = 0; t < state.test.size(); ++t) {
      const double e = error(static_cast<Eigen::Index>(t));
      if (e > ind.tau_max)
        over.push_back(state.test[t]);
      else if (e < ind.tau_min)
        under.push_back(state.test[t]);
    }
    const std::vector<Point> existing = points.all();
    state.add_set = separate(over, existing, std::max(options.separation, options.add_spacing));

    if (!under.empty() && !points.interior.empty()) {
      const PointGrid interior_grid(points.interior,
                                    query_cell(points.num_interior(), options.separation));
      std::vector<bool> nominated(points.num_interior(), false);
      for (const Point& y : under) {
        const std::size_t i = interior_grid.nearest(y).first;
        if (fresh[i] || nominated[i])
          continue;
        nominated[i] = true;
        state.remove_set.push_back(i);
      }
      const std::size_t removable =
          points.num_interior() > options.min_interior ? points.num_interior() - options.min_interior
                                                       : 0;
      if (state.remove_set.size() > removable)
        state.remove_set.resize(removable);
    }

    // Stop or update.
    StopReason reason = StopReason::None;
    const bool nothing_to_do = state.add_set.empty() && state.remove_set.empty();
    if (options.stopping == StoppingRule::EmptyRemoval ? state.remove_set.empty() : nothing_to_do)
      reason = StopReason::Converged;
    else if (k >= options.max_iterations)
      reason = StopReason::MaxIterations;

    PointSet next;
    std::vector<bool> next_fresh;
    if (reason == StopReason::None) {
      std::vector<bool> removed(points.num_interior(), false);
      for (std::size_t i : state.remove_set)
        removed[i] = true;
      for (std::size_t i = 0; i < points.num_interior(); ++i)
        if (!removed[i]) {
          next.interior.push_back(points.interior[i]);
          next_fresh.push_back(false);
        }
      for (const Point& p : state.add_set) {
        next.interior.push_back(p);
        next_fresh.push_back(true);
      }
      next.boundary = boundary_ring(boundary_count(next.num_interior()));
      if (next.size() > options.max_points)
        reason = StopReason::MaxPoints;
    }

    state.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    state.stop_reason = reason;
    history.push_back(std::move(state));

    if (reason != StopReason::None) {
      result.solution = std::move(solution);
      result.reason = reason;
      break;
    }
    points = std::move(next);
    fresh = std::move(next_fresh);
  }

  if (history_out)
    result.history = history;
  else
    result.history = std::move(local_history);
  return result;
}

} // namespace rbfpum
