#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rbfpum/assembly.hpp"
#include "rbfpum/geometry.hpp"
#include "rbfpum/problems.hpp"
#include "rbfpum/solver.hpp"

namespace rbfpum {

enum class IndicatorKind {
  InterpolantDisagreement, ///< blended solution vs. one local interpolant, at test points
  CoarseFine,              ///< solution on a refined set vs. the current one
};

struct IndicatorConfig {
  IndicatorKind kind = IndicatorKind::InterpolantDisagreement;
  double tau_min = 1e-8;
  double tau_max = 1e-5;
  double test_multiplier = 2.0; ///< test points per interior collocation point
};

enum class StoppingRule {
  NoChange,     ///< stop once nothing is added and nothing is removed
  EmptyRemoval, ///< stop as soon as the removal set is empty
};

enum class StopReason { None, Converged, MaxIterations, MaxPoints };
const char* to_string(StopReason reason);

struct AmrsOptions {
  IndicatorConfig indicator;
  StoppingRule stopping = StoppingRule::NoChange;
  std::size_t max_iterations = 50;
  std::size_t max_points = 5000;
  double separation = 1e-4;      ///< minimum distance between collocation points
  double add_spacing = 5e-3;     ///< minimum distance from an added point to existing nodes
  std::size_t min_interior = 9;  ///< removals never go below this many interior points
  KernelModel kernel{KernelFamily::Matern6, 3.0};
  DiscretizationOptions discretization;
};

/// One pass of solve / estimate / mark.
struct RefinementState {
  std::size_t k = 0;
  PointSet points;                 ///< X^(k)
  std::vector<Point> test;         ///< Y^(k)
  std::vector<Point> add_set;      ///< Z_max, after separation filtering
  std::vector<std::size_t> remove_set; ///< Z_min as interior indices into points
  std::size_t patches_per_axis = 0;
  double mae = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double max_indicator = 0.0;
  double condition = 0.0;
  double seconds = 0.0;
  StopReason stop_reason = StopReason::None;
};

struct AmrsResult {
  Solution solution;
  std::vector<RefinementState> history;
  StopReason reason = StopReason::None;
};

/// Indicator at each test point: |u(y) - u_j(y)| where u is the blended
/// solution and u_j the local interpolant of the patch whose center is
/// nearest to y among the patches containing it.
Eigen::VectorXd indicator_interpolant(const Solution& solution, std::span<const Point> test_points);

/// The coarse set plus up to `extra` new Halton interior points, dropping any
/// candidate closer than `separation` to an existing point or the boundary.
PointSet make_fine_set(const PointSet& coarse, HaltonStream& halton, std::size_t extra,
                       double separation = 1e-4);

/// |u_fine(x) - u_coarse(x)| at the given points, each solution computed by
/// collocation on its own set. `fine` must contain `coarse`.
Eigen::VectorXd coarse_fine_difference(const PoissonProblem& problem, const PointSet& coarse,
                                       const PointSet& fine, const KernelModel& kernel,
                                       const DiscretizationOptions& options,
                                       std::span<const Point> at);

/// The coarse/fine indicator evaluated on all coarse collocation points.
Eigen::VectorXd indicator_coarse_fine(const PoissonProblem& problem, const PointSet& coarse,
                                      const PointSet& fine, const KernelModel& kernel,
                                      const DiscretizationOptions& options = {});

/**
 * Adaptive refinement: solve, estimate at fresh Halton test points, add test
 * points whose indicator exceeds tau_max, drop the interior collocation points
 * nearest to test points below tau_min, regenerate the boundary ring, repeat.
 *
 * `halton` supplies the test points and must not revisit indices used for the
 * initial set. On failure the exception propagates; `history_out`, when
 * given, then holds the iterations completed so far.
 */
AmrsResult amrs_run(const PoissonProblem& problem, const AmrsOptions& options, PointSet initial,
                    HaltonStream& halton, std::vector<RefinementState>* history_out = nullptr);

} // namespace rbfpum
