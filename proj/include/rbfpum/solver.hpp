#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "rbfpum/assembly.hpp"

namespace rbfpum {

/// Sparse LU factorization of a square matrix with solves against it and its transpose.
class SparseFactorization {
public:
  /// Throws SolveError if the matrix is structurally or numerically singular.
  explicit SparseFactorization(const Eigen::SparseMatrix<double>& matrix);

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve_transposed(const Eigen::VectorXd& b) const;
  Eigen::Index size() const noexcept { return n_; }

private:
  Eigen::Index n_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Lower estimate of ||A^{-1}||_1 (Hager's method with Higham's refinements,
/// at most five power steps).
double estimate_inverse_norm1(const SparseFactorization& factorization);

/// Estimated 1-norm condition number of L; +infinity when L is singular.
double estimate_condition(const Eigen::SparseMatrix<double>& L);
double estimate_condition(const Eigen::SparseMatrix<double>& L,
                          const SparseFactorization& factorization);
inline double estimate_condition(const GlobalSystem& system) {
  return estimate_condition(system.L);
}

/**
 * Collocation solution: nodal values plus, for every patch, the coefficients
 * of the local kernel interpolant of those values.
 */
struct Solution {
  std::shared_ptr<const Discretization> disc;
  Eigen::VectorXd nodal;
  std::vector<Eigen::VectorXd> coefficients;

  /// Local interpolant of patch j at y.
  double local_value(std::size_t patch, const Point& y) const;
  /// Partition-of-unity blend of the local interpolants. Throws CoverageError
  /// for a point outside every patch.
  double value(const Point& y) const;
};

/// Builds the local interpolants of the given nodal values.
Solution make_solution(std::shared_ptr<const Discretization> disc, Eigen::VectorXd nodal);

/// Solves L z = rhs. Throws SolveError on failure.
Eigen::VectorXd solve_nodal(const GlobalSystem& system);
Eigen::VectorXd solve_nodal(const GlobalSystem& system, const SparseFactorization& factorization);

Solution solve(std::shared_ptr<const Discretization> disc, const GlobalSystem& system);

Eigen::VectorXd evaluate(const Solution& solution, std::span<const Point> points);

} // namespace rbfpum
