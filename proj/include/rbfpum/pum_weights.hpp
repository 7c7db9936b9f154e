#pragma once

#include <vector>

#include "rbfpum/geometry.hpp"

namespace rbfpum {

/**
 * Shepard weights w_j = psi_j / sum_k psi_k at one point, where psi_j is the
 * Wendland W2 generator scaled to the radius of patch j. Only patches with a
 * positive weight are listed; every other patch has w_j = 0 there.
 */
struct WeightEvaluation {
  std::vector<std::size_t> active; ///< ascending patch indices
  std::vector<double> values;
  std::vector<Point> gradients;
  std::vector<double> laplacians;

  /// w_j(x) for any patch index (zero when inactive).
  double value_of(std::size_t patch) const;
};

/// Throws CoverageError if x lies in no open patch.
WeightEvaluation evaluate_weights(const Point& x, const Covering& covering);

} // namespace rbfpum
