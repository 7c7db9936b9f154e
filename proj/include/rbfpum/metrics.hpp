#pragma once

#include <vector>

#include "rbfpum/problems.hpp"
#include "rbfpum/solver.hpp"

namespace rbfpum {

struct ErrorNorms {
  double mae = 0.0;
  double rmse = 0.0;
};

/// n x n uniform grid over [0, 1]^2 including the boundary, row-major in y.
std::vector<Point> evaluation_grid(std::size_t n = 40);

/// Maximum and root-mean-square absolute error of `approx` against `exact`.
ErrorNorms error_norms(const Eigen::VectorXd& exact, const Eigen::VectorXd& approx);

/// Errors of the solution against the exact solution on the 40 x 40 grid.
/// Throws Error if the problem has no exact solution.
ErrorNorms compute_errors(const Solution& solution, const PoissonProblem& problem);

} // namespace rbfpum
