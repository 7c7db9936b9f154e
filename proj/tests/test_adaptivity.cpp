#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rbfpum/adaptivity.hpp"

using namespace rbfpum;

namespace {

const KernelModel m6(KernelFamily::Matern6, 3.0);

Eigen::VectorXd random_nodal(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Eigen::VectorXd::NullaryExpr(static_cast<Eigen::Index>(n), [&] { return u(rng); });
}

double min_pairwise(const std::vector<Point>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

AmrsOptions short_run(std::size_t iterations) {
  AmrsOptions opt;
  opt.max_iterations = iterations;
  return opt;
}

} // namespace

TEST_CASE("interpolant indicator vanishes on a single patch") {
  const auto disc = discretize(make_initial_points(9, InitialLayout::Grid), m6,
                               DiscretizationOptions{1.2, 1});
  const Solution sol = make_solution(disc, random_nodal(disc->points.size(), 1));
  HaltonStream halton(500);
  const auto test = halton.draw(300);
  CHECK(indicator_interpolant(sol, test).maxCoeff() <= 1e-10);
}

TEST_CASE("interpolant indicator at collocation nodes") {
  const auto disc = discretize(make_initial_points(11, InitialLayout::Halton), m6);
  const Solution sol = solve(disc, assemble_global(*disc, make_problem(ProblemName::U2)));
  const std::vector<Point> nodes = disc->points.interior;
  CHECK(indicator_interpolant(sol, nodes).maxCoeff() <= 1e-10);
}

TEST_CASE("interpolant indicator matches a brute-force composition") {
  const PointSet set = make_initial_points(9, InitialLayout::Grid);
  const auto disc = discretize(set, m6, DiscretizationOptions{1.5, 3});
  const Covering& cov = disc->covering;
  const Solution sol = make_solution(disc, random_nodal(set.size(), 3));

  auto local = [&](std::size_t j, const Point& y) {
    const auto& m = cov[j].members;
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd z(n), phi(n);
    for (Eigen::Index a = 0; a < n; ++a) {
      z(a) = sol.nodal(static_cast<Eigen::Index>(m[a]));
      phi(a) = m6.value((y - set[m[a]]).norm());
      for (Eigen::Index b = 0; b < n; ++b)
        A(a, b) = m6.value((set[m[a]] - set[m[b]]).norm());
    }
    return phi.dot(A.fullPivLu().solve(z));
  };

  HaltonStream halton(900);
  const auto test = halton.draw(40);
  const Eigen::VectorXd e = indicator_interpolant(sol, test);
  for (std::size_t t = 0; t < test.size(); ++t) {
    const Point& y = test[t];
    double sum_psi = 0.0, blend = 0.0, nearest = std::numeric_limits<double>::infinity();
    std::size_t chosen = 0;
    for (std::size_t j = 0; j < cov.size(); ++j) {
      const double r = (y - cov[j].center).norm();
      const double s = r / cov.radius();
      if (s >= 1.0)
        continue;
      const double psi = std::pow(1.0 - s, 4) * (4.0 * s + 1.0);
      sum_psi += psi;
      blend += psi * local(j, y);
      if (r < nearest) {
        nearest = r;
        chosen = j;
      }
    }
    const double expected = std::abs(blend / sum_psi - local(chosen, y));
    CHECK(std::abs(e(static_cast<Eigen::Index>(t)) - expected) <= 1e-10);
  }
}

TEST_CASE("coarse/fine indicator") {
  const PoissonProblem prob = make_problem(ProblemName::U1);
  HaltonStream halton;
  const PointSet coarse = make_initial_points(11, InitialLayout::Grid);

  SUBCASE("identical sets give exactly zero") {
    const Eigen::VectorXd e = indicator_coarse_fine(prob, coarse, coarse, m6);
    CHECK(e.size() == 121);
    CHECK(e.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("smooth problem stays in a sane band") {
    const PointSet fine = make_fine_set(coarse, halton, coarse.num_interior());
    CHECK(fine.size() == 202);
    const Eigen::VectorXd e = indicator_coarse_fine(prob, coarse, fine, m6);
    MESSAGE("max coarse/fine difference " << e.maxCoeff());
    CHECK(e.maxCoeff() < 1e-1);
    CHECK(e.maxCoeff() > 1e-10);
  }
  SUBCASE("independent of the coarse point order") {
    const PointSet fine = make_fine_set(coarse, halton, coarse.num_interior());
    const Eigen::VectorXd e = indicator_coarse_fine(prob, coarse, fine, m6);

    std::vector<std::size_t> perm(coarse.num_interior());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(8));
    PointSet coarse_p = coarse, fine_p = fine;
    for (std::size_t i = 0; i < perm.size(); ++i)
      coarse_p.interior[i] = fine_p.interior[i] = coarse.interior[perm[i]];
    const Eigen::VectorXd e_p = indicator_coarse_fine(prob, coarse_p, fine_p, m6);
    for (std::size_t i = 0; i < perm.size(); ++i)
      CHECK(std::abs(e_p(static_cast<Eigen::Index>(i)) - e(static_cast<Eigen::Index>(perm[i]))) <= 1e-10);
  }
}

TEST_CASE("fine set keeps its separation") {
  const PointSet coarse = make_initial_points(11, InitialLayout::Grid);
  HaltonStream halton;
  const PointSet fine = make_fine_set(coarse, halton, 300, 0.02);
  CHECK(fine.num_interior() > coarse.num_interior());
  CHECK(fine.num_interior() < coarse.num_interior() + 300);
  CHECK(std::equal(coarse.interior.begin(), coarse.interior.end(), fine.interior.begin()));
  CHECK(min_pairwise(fine.all()) >= 0.02 - 1e-15);
}

TEST_CASE("disabled thresholds give the plain solve") {
  AmrsOptions opt;
  opt.indicator.tau_min = 0.0;
  opt.indicator.tau_max = std::numeric_limits<double>::infinity();
  HaltonStream halton;
  const AmrsResult res = amrs_run(make_problem(ProblemName::U1), opt,
                                  make_initial_points(11, InitialLayout::Grid), halton);
  REQUIRE(res.history.size() == 1);
  CHECK(res.history[0].add_set.empty());
  CHECK(res.history[0].remove_set.empty());
  CHECK(res.reason == StopReason::Converged);
  CHECK(res.solution.disc->points.size() == 121);
}

TEST_CASE("refinement invariants over a short run") {
  const PoissonProblem prob = make_problem(ProblemName::U2);
  const AmrsOptions opt = short_run(12);
  HaltonStream halton;
  const AmrsResult res =
      amrs_run(prob, opt, make_initial_points(11, InitialLayout::Halton, &halton), halton);
  REQUIRE(res.history.size() == 12);
  CHECK(res.reason == StopReason::MaxIterations);
  std::size_t grown = 0;
  for (const RefinementState& s : res.history) {
    CHECK(s.points.num_boundary() == boundary_count(s.points.num_interior()));
    CHECK(min_pairwise(s.points.all()) >= opt.separation);
    CHECK(s.test.size() == static_cast<std::size_t>(std::ceil(2.0 * s.points.num_interior())));
    for (const Point& z : s.add_set) {
      CHECK(std::find(s.test.begin(), s.test.end(), z) != s.test.end());
      for (const Point& p : s.points.all())
        CHECK((z - p).norm() >= opt.separation);
    }
    for (std::size_t i : s.remove_set)
      CHECK(i < s.points.num_interior());
    std::vector<std::size_t> sorted = s.remove_set;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK(s.rmse <= s.mae);
    CHECK(s.condition > 1.0);
    if (s.k > 1)
      grown += s.points.size() > res.history[s.k - 2].points.size();
  }
  CHECK(grown > 0);
  // Step 4 update between consecutive iterations.
  for (std::size_t k = 1; k < res.history.size(); ++k) {
    const RefinementState& prev = res.history[k - 1];
    const std::size_t expected =
        prev.points.num_interior() + prev.add_set.size() - prev.remove_set.size();
    CHECK(res.history[k].points.num_interior() == expected);
  }
}

TEST_CASE("runs are deterministic") {
  const PoissonProblem prob = make_problem(ProblemName::U1);
  auto once = [&] {
    HaltonStream halton;
    return amrs_run(prob, short_run(6), make_initial_points(11, InitialLayout::Grid), halton);
  };
  const AmrsResult a = once(), b = once();
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) {
    CHECK(a.history[k].points.interior == b.history[k].points.interior);
    CHECK(a.history[k].mae == b.history[k].mae);
    CHECK(a.history[k].condition == b.history[k].condition);
  }
  CHECK(a.solution.nodal == b.solution.nodal);
}

TEST_CASE("literal stopping rule halts once nothing is removed") {
  AmrsOptions opt;
  opt.stopping = StoppingRule::EmptyRemoval;
  HaltonStream halton;
  const AmrsResult res = amrs_run(make_problem(ProblemName::U1), opt,
                                  make_initial_points(11, InitialLayout::Grid), halton);
  CHECK(res.history.back().remove_set.empty());
  CHECK(res.reason == StopReason::Converged);
}

TEST_CASE("limits") {
  const PoissonProblem prob = make_problem(ProblemName::U1);
  SUBCASE("point cap") {
    AmrsOptions opt;
    opt.max_points = 150;
    HaltonStream halton;
    const AmrsResult res = amrs_run(prob, opt, make_initial_points(11, InitialLayout::Grid), halton);
    CHECK(res.reason == StopReason::MaxPoints);
    CHECK(res.solution.disc->points.size() <= 150);
  }
  SUBCASE("minimum interior count") {
    AmrsOptions opt;
    opt.indicator.tau_min = 1.0; // everything is "accurate enough"
    opt.indicator.tau_max = 2.0;
    opt.max_iterations = 20;
    HaltonStream halton;
    const AmrsResult res = amrs_run(prob, opt, make_initial_points(11, InitialLayout::Grid), halton);
    for (const RefinementState& s : res.history)
      CHECK(s.points.num_interior() >= opt.min_interior);
    CHECK(res.solution.disc->points.num_interior() == opt.min_interior);
  }
  SUBCASE("bad configuration") {
    HaltonStream halton;
    AmrsOptions opt;
    opt.indicator.tau_min = 1e-3;
    opt.indicator.tau_max = 1e-4;
    CHECK_THROWS_AS(amrs_run(prob, opt, make_initial_points(5, InitialLayout::Grid), halton),
                    ConfigError);
    opt = AmrsOptions{};
    opt.max_iterations = 0;
    CHECK_THROWS_AS(amrs_run(prob, opt, make_initial_points(5, InitialLayout::Grid), halton),
                    ConfigError);
  }
}

TEST_CASE("coarse/fine indicator drives a run") {
  AmrsOptions opt = short_run(3);
  opt.indicator.kind = IndicatorKind::CoarseFine;
  HaltonStream halton;
  const AmrsResult res = amrs_run(make_problem(ProblemName::U1), opt,
                                  make_initial_points(11, InitialLayout::Grid), halton);
  REQUIRE(res.history.size() == 3);
  CHECK_FALSE(res.history[0].add_set.empty());
  CHECK(res.history[2].mae < res.history[0].mae);
  for (const RefinementState& s : res.history)
    CHECK(min_pairwise(s.points.all()) >= opt.separation);
}

// The coarse/fine difference stays near the discretization error, far above
// tau_max, so u1 keeps refining until the fine set's local matrices become
// numerically singular. The failure must surface with the history so far.
TEST_CASE("failure keeps the partial history") {
  AmrsOptions opt = short_run(10);
  opt.indicator.kind = IndicatorKind::CoarseFine;
  HaltonStream halton;
  std::vector<RefinementState> history;
  CHECK_THROWS_AS(amrs_run(make_problem(ProblemName::U1), opt,
                           make_initial_points(11, InitialLayout::Grid), halton, &history),
                  NumericalError);
  CHECK(history.size() >= 2);
  CHECK(history.size() < 10);
}

TEST_CASE("stop reasons print") {
  CHECK(std::string(to_string(StopReason::Converged)) == "converged");
  CHECK(std::string(to_string(StopReason::MaxIterations)) == "max_iterations");
  CHECK(std::string(to_string(StopReason::MaxPoints)) == "max_points");
}
