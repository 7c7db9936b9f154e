#include "rbfpum/solver.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "rbfpum/pum_weights.hpp"

namespace rbfpum {

SparseFactorization::SparseFactorization(const Eigen::SparseMatrix<double>& matrix)
    : n_(matrix.rows()) {
  if (matrix.rows() != matrix.cols())
    throw SolveError("collocation matrix is not square");
  lu_.analyzePattern(matrix);
  lu_.factorize(matrix);
  if (lu_.info() != Eigen::Success)
    throw SolveError(fmt::format("sparse LU failed: {}", lu_.lastErrorMessage()));
}

Eigen::VectorXd SparseFactorization::solve(const Eigen::VectorXd& b) const {
  return lu_.solve(b);
}

Eigen::VectorXd SparseFactorization::solve_transposed(const Eigen::VectorXd& b) const {
  return lu_.transpose().solve(b);
}

namespace {

Eigen::VectorXd signs(const Eigen::VectorXd& v) {
  return v.unaryExpr([](double a) { return a >= 0.0 ? 1.0 : -1.0; });
}

double norm1(const Eigen::SparseMatrix<double>& A) {
  double best = 0.0;
  // Column sums; works for either storage order via a dense accumulator.
  Eigen::VectorXd col = Eigen::VectorXd::Zero(A.cols());
  for (Eigen::Index o = 0; o < A.outerSize(); ++o)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, o); it; ++it)
      col(it.col()) += std::abs(it.value());
  if (col.size() > 0)
    best = col.maxCoeff();
  return best;
}

} // namespace

double estimate_inverse_norm1(const SparseFactorization& f) {
  const Eigen::Index n = f.size();
  if (n == 0)
    return 0.0;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::VectorXd y = f.solve(x);
  double est = y.lpNorm<1>();
  if (n == 1)
    return est;

  Eigen::VectorXd xi = signs(y);
  Eigen::VectorXd z = f.solve_transposed(xi);
  Eigen::Index j = 0;
  z.cwiseAbs().maxCoeff(&j);
  for (int iter = 2; iter <= 5; ++iter) {
    x.setZero();
    x(j) = 1.0;
    y = f.solve(x);
    const double previous = est;
    est = y.lpNorm<1>();
    const Eigen::VectorXd xi_new = signs(y);
    if (xi_new == xi || est <= previous) {
      est = std::max(est, previous);
      break;
    }
    xi = xi_new;
    z = f.solve_transposed(xi);
    const Eigen::Index j_last = j;
    z.cwiseAbs().maxCoeff(&j);
    if (std::abs(z(j_last)) == std::abs(z(j)))
      break;
  }

  // Alternating-sign probe guards against the power method stalling.
  for (Eigen::Index i = 0; i < n; ++i)
    x(i) = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + static_cast<double>(i) / static_cast<double>(n - 1));
  const double alt = 2.0 * f.solve(x).lpNorm<1>() / (3.0 * static_cast<double>(n));
  return std::max(est, alt);
}

double estimate_condition(const Eigen::SparseMatrix<double>& L,
                          const SparseFactorization& factorization) {
  const double inv = estimate_inverse_norm1(factorization);
  if (!std::isfinite(inv))
    return std::numeric_limits<double>::infinity();
  return norm1(L) * inv;
}

double estimate_condition(const Eigen::SparseMatrix<double>& L) {
  try {
    const SparseFactorization f(L);
    return estimate_condition(L, f);
  } catch (const SolveError&) {
    return std::numeric_limits<double>::infinity();
  }
}

Eigen::VectorXd solve_nodal(const GlobalSystem& system, const SparseFactorization& f) {
  if (system.rhs.size() != system.L.rows())
    throw SolveError("right-hand side length does not match the matrix");
  Eigen::VectorXd z = f.solve(system.rhs);
  // Identity rows: the elimination may round these entries, the data may not.
  for (std::size_t k = 0; k < system.boundary_row.size(); ++k)
    if (system.boundary_row[k])
      z(static_cast<Eigen::Index>(k)) = system.rhs(static_cast<Eigen::Index>(k));
  const double residual = (system.L * z - system.rhs).lpNorm<Eigen::Infinity>();
  double norm_inf = 0.0;
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(system.L.rows());
    for (Eigen::Index o = 0; o < system.L.outerSize(); ++o)
      for (Eigen::SparseMatrix<double>::InnerIterator it(system.L, o); it; ++it)
        rows(it.row()) += std::abs(it.value());
    if (rows.size() > 0)
      norm_inf = rows.maxCoeff();
  }
  const double bound = 1e-8 * (norm_inf * z.lpNorm<Eigen::Infinity>() +
                               system.rhs.lpNorm<Eigen::Infinity>());
  if (!z.allFinite() || !(residual <= bound))
    throw SolveError(fmt::format("collocation solve is inaccurate: residual {:.3e} exceeds {:.3e} "
                                 "(estimated condition {:.3e})",
                                 residual, bound, estimate_condition(system.L)));
  return z;
}

Eigen::VectorXd solve_nodal(const GlobalSystem& system) {
  const SparseFactorization f(system.L);
  return solve_nodal(system, f);
}

Solution make_solution(std::shared_ptr<const Discretization> disc, Eigen::VectorXd nodal) {
  if (nodal.size() != static_cast<Eigen::Index>(disc->points.size()))
    throw Error("nodal vector length does not match the point set");
  Solution sol;
  sol.coefficients.reserve(disc->locals.size());
  for (std::size_t j = 0; j < disc->locals.size(); ++j) {
    const auto& members = disc->covering[j].members;
    Eigen::VectorXd local(static_cast<Eigen::Index>(members.size()));
    for (std::size_t i = 0; i < members.size(); ++i)
      local(static_cast<Eigen::Index>(i)) = nodal(static_cast<Eigen::Index>(members[i]));
    sol.coefficients.push_back(disc->locals[j].lu.solve(local));
  }
  sol.disc = std::move(disc);
  sol.nodal = std::move(nodal);
  return sol;
}

Solution solve(std::shared_ptr<const Discretization> disc, const GlobalSystem& system) {
  return make_solution(std::move(disc), solve_nodal(system));
}

double Solution::local_value(std::size_t patch, const Point& y) const {
  // Cardinal form: the kernel vector at y is solved against A_j, then dotted
  // with the nodal values. Same value as sum(c_i phi_i), but without the
  // cancellation among large coefficients, so it is linear in z to rounding.
  const auto& members = disc->covering[patch].members;
  const auto n = static_cast<Eigen::Index>(members.size());
  Eigen::VectorXd phi(n);
  for (Eigen::Index i = 0; i < n; ++i)
    phi(i) = disc->kernel.value((y - disc->points[members[static_cast<std::size_t>(i)]]).norm());
  const Eigen::VectorXd cardinal = disc->locals[patch].lu.solve(phi);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    sum += cardinal(i) * nodal(static_cast<Eigen::Index>(members[static_cast<std::size_t>(i)]));
  return sum;
}

double Solution::value(const Point& y) const {
  const WeightEvaluation we = evaluate_weights(y, disc->covering);
  double sum = 0.0;
  for (std::size_t a = 0; a < we.active.size(); ++a)
    sum += we.values[a] * local_value(we.active[a], y);
  return sum;
}

Eigen::VectorXd evaluate(const Solution& solution, std::span<const Point> points) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = solution.value(points[i]);
  return out;
}

} // namespace rbfpum
