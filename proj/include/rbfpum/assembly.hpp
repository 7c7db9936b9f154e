#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "rbfpum/geometry.hpp"
#include "rbfpum/kernels.hpp"

namespace rbfpum {

class PoissonProblem;

/**
 * Kernel matrices of one patch and its discrete operator.
 *
 * With A the kernel matrix on the patch nodes, A_grad_* and A_lap the
 * matrices of kernel derivatives, and W, W_grad_*, W_lap the diagonal
 * Shepard weight factors at the same nodes,
 *
 *   L_bar = -(W_lap A + 2 (W_grad_x A_grad_x + W_grad_y A_grad_y) + W A_lap) A^{-1}
 *
 * maps nodal values on the patch to -Laplacian(w_j u_j) at those nodes.
 */
struct LocalSystem {
  std::size_t patch_index = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_grad_x, A_grad_y;
  Eigen::MatrixXd A_lap;
  Eigen::VectorXd W, W_grad_x, W_grad_y, W_lap; ///< diagonals
  Eigen::MatrixXd L_bar;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu; ///< factorization of A
};

/// Throws ConditioningError if A is numerically singular.
LocalSystem build_local_system(const Covering& covering, std::size_t patch_index,
                               const PointSet& points, const KernelModel& kernel);

struct DiscretizationOptions {
  double overlap = 2.5;
  std::size_t patches_per_axis = 0; ///< 0 selects default_patches_per_axis(N)
};

/// Everything the collocation scheme derives from a point set.
struct Discretization {
  PointSet points;
  Covering covering;
  KernelModel kernel;
  std::vector<LocalSystem> locals;
};

/// Covering plus local systems for every patch.
std::shared_ptr<const Discretization> discretize(PointSet points, const KernelModel& kernel,
                                                 const DiscretizationOptions& options = {});

struct GlobalSystem {
  Eigen::SparseMatrix<double> L;
  Eigen::VectorXd rhs;
  std::vector<bool> boundary_row;
};

/// Scatters the interior rows of every L_bar into the global matrix; boundary
/// rows are identity rows with Dirichlet data on the right-hand side.
GlobalSystem assemble_global(const Discretization& disc, const PoissonProblem& problem);

/// Writes the matrix as `row,col,value` lines.
void write_matrix_coo(const std::filesystem::path& path, const Eigen::SparseMatrix<double>& L);

} // namespace rbfpum
