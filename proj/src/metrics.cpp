#include "rbfpum/metrics.hpp"

#include <cmath>

namespace rbfpum {

std::vector<Point> evaluation_grid(std::size_t n) {
  std::vector<Point> grid;
  grid.reserve(n * n);
  const double h = n > 1 ? 1.0 / static_cast<double>(n - 1) : 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      grid.emplace_back(i * h, j * h);
  return grid;
}

ErrorNorms error_norms(const Eigen::VectorXd& exact, const Eigen::VectorXd& approx) {
  const Eigen::VectorXd diff = (exact - approx).cwiseAbs();
  if (diff.size() == 0)
    return {};
  return {diff.maxCoeff(), std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()))};
}

ErrorNorms compute_errors(const Solution& solution, const PoissonProblem& problem) {
  const std::vector<Point> grid = evaluation_grid();
  Eigen::VectorXd exact(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    exact(static_cast<Eigen::Index>(i)) = problem.exact(grid[i]);
  return error_norms(exact, evaluate(solution, grid));
}

} // namespace rbfpum
