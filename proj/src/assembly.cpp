#include "rbfpum/assembly.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "rbfpum/problems.hpp"
#include "rbfpum/pum_weights.hpp"

namespace rbfpum {

LocalSystem build_local_system(const Covering& covering, std::size_t patch_index,
                               const PointSet& points, const KernelModel& kernel) {
  const Patch& patch = covering[patch_index];
  const auto n = static_cast<Eigen::Index>(patch.members.size());

  LocalSystem sys;
  sys.patch_index = patch_index;
  sys.A.resize(n, n);
  sys.A_grad_x.resize(n, n);
  sys.A_grad_y.resize(n, n);
  sys.A_lap.resize(n, n);
  sys.W.resize(n);
  sys.W_grad_x.resize(n);
  sys.W_grad_y.resize(n);
  sys.W_lap.resize(n);

  for (Eigen::Index k = 0; k < n; ++k) {
    const Point& xk = points[patch.members[k]];
    for (Eigen::Index i = 0; i < n; ++i) {
      const KernelSample s = kernel.sample(xk - points[patch.members[i]]);
      sys.A(k, i) = s.value;
      sys.A_grad_x(k, i) = s.gradient.x();
      sys.A_grad_y(k, i) = s.gradient.y();
      sys.A_lap(k, i) = s.laplacian;
    }
    // Nodes on the rim of the patch carry zero weight. A boundary node may sit
    // on the rim of every patch (overlap 1); its row is replaced anyway.
    sys.W(k) = sys.W_grad_x(k) = sys.W_grad_y(k) = sys.W_lap(k) = 0.0;
    if (points.is_boundary(patch.members[k]) && covering.containing(xk).empty())
      continue;
    const WeightEvaluation we = evaluate_weights(xk, covering);
    const auto it = std::lower_bound(we.active.begin(), we.active.end(), patch_index);
    if (it != we.active.end() && *it == patch_index) {
      const auto a = static_cast<std::size_t>(it - we.active.begin());
      sys.W(k) = we.values[a];
      sys.W_grad_x(k) = we.gradients[a].x();
      sys.W_grad_y(k) = we.gradients[a].y();
      sys.W_lap(k) = we.laplacians[a];
    }
  }

  sys.lu.compute(sys.A);
  const double scale = sys.A.cwiseAbs().rowwise().sum().maxCoeff();
  const double min_pivot = sys.lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= 1e-14 * scale))
    throw ConditioningError(patch_index,
                            fmt::format("kernel matrix of patch {} is numerically singular "
                                        "(pivot {:.3e}, norm {:.3e})",
                                        patch_index, min_pivot, scale));

  // B = W_lap A + 2 (W_gx A_gx + W_gy A_gy) + W A_lap ; L_bar = -B A^{-1}.
  Eigen::MatrixXd B = sys.W_lap.asDiagonal() * sys.A;
  B.noalias() += 2.0 * (sys.W_grad_x.asDiagonal() * sys.A_grad_x);
  B.noalias() += 2.0 * (sys.W_grad_y.asDiagonal() * sys.A_grad_y);
  B.noalias() += sys.W.asDiagonal() * sys.A_lap;
  // A is symmetric, so B A^{-1} = (A^{-1} B^T)^T.
  sys.L_bar = -sys.lu.solve(B.transpose()).transpose();
  return sys;
}

std::shared_ptr<const Discretization> discretize(PointSet points, const KernelModel& kernel,
                                                 const DiscretizationOptions& options) {
  const std::size_t per_axis = options.patches_per_axis > 0
                                   ? options.patches_per_axis
                                   : default_patches_per_axis(points.size());
  Covering covering = build_covering(points, per_axis, options.overlap);
  std::vector<LocalSystem> locals;
  locals.reserve(covering.size());
  for (std::size_t j = 0; j < covering.size(); ++j)
    locals.push_back(build_local_system(covering, j, points, kernel));
  return std::make_shared<const Discretization>(
      Discretization{std::move(points), std::move(covering), kernel, std::move(locals)});
}

GlobalSystem assemble_global(const Discretization& disc, const PoissonProblem& problem) {
  const PointSet& points = disc.points;
  const std::size_t n = points.size();
  if (disc.covering.size() != disc.locals.size())
    throw Error("local systems do not match the covering");

  GlobalSystem sys;
  sys.rhs.resize(static_cast<Eigen::Index>(n));
  sys.boundary_row.assign(n, false);

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t k = 0; k < n; ++k) {
    const Point& x = points[k];
    const auto row = static_cast<Eigen::Index>(k);
    if (points.is_boundary(k)) {
      sys.boundary_row[k] = true;
      triplets.emplace_back(row, row, 1.0);
      sys.rhs(row) = problem.boundary(x);
      continue;
    }
    const auto& owners = disc.covering.patches_of_point(k);
    if (owners.empty())
      throw CoverageError(fmt::format("collocation point {} is not covered", k));
    for (std::size_t j : owners) {
      const auto& members = disc.covering[j].members;
      const auto local = static_cast<Eigen::Index>(
          std::lower_bound(members.begin(), members.end(), k) - members.begin());
      const Eigen::MatrixXd& L_bar = disc.locals[j].L_bar;
      for (Eigen::Index i = 0; i < L_bar.cols(); ++i)
        triplets.emplace_back(row, static_cast<Eigen::Index>(members[i]), L_bar(local, i));
    }
    sys.rhs(row) = problem.source(x);
  }

  sys.L.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  sys.L.setFromTriplets(triplets.begin(), triplets.end());
  sys.L.makeCompressed();
  return sys;
}

void write_matrix_coo(const std::filesystem::path& path, const Eigen::SparseMatrix<double>& L) {
  std::ofstream out(path);
  if (!out)
    throw Error(fmt::format("cannot open {} for writing", path.string()));
  out << "row,col,value\n";
  for (Eigen::Index c = 0; c < L.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(L, c); it; ++it)
      out << fmt::format("{},{},{:.17g}\n", it.row(), it.col(), it.value());
}

} // namespace rbfpum
