#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "rbfpum/pum_weights.hpp"

using namespace rbfpum;

namespace {

Covering covering_of(std::size_t per_axis, double overlap) {
  return build_covering(make_initial_points(21, InitialLayout::Grid), per_axis, overlap);
}

double distance_to_rims(const Covering& cov, const Point& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const Patch& p : cov.patches())
    d = std::min(d, std::abs((x - p.center).norm() - p.radius));
  return d;
}

} // namespace

TEST_CASE("single active patch") {
  const Covering cov = covering_of(1, 1.2);
  const WeightEvaluation we = evaluate_weights(Point(0.3, 0.8), cov);
  REQUIRE(we.active.size() == 1);
  CHECK(we.values[0] == 1.0);
  CHECK(we.gradients[0] == Point(0.0, 0.0));
  CHECK(we.laplacians[0] == 0.0);
}

TEST_CASE("symmetric point between two patches") {
  const PointSet set = make_initial_points(11, InitialLayout::Grid);
  const Covering cov = build_covering(set, 2, 1.2);
  const WeightEvaluation we = evaluate_weights(Point(0.5, 0.25), cov);
  // Patches 0 and 1 (bottom row) are equidistant; the top row is farther away.
  CHECK(we.value_of(0) == doctest::Approx(we.value_of(1)).epsilon(1e-15));
  const WeightEvaluation mid = evaluate_weights(Point(0.5, 0.5), cov);
  REQUIRE(mid.active.size() == 4);
  for (double w : mid.values)
    CHECK(w == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(we.value_of(99) == 0.0);
}

TEST_CASE("uncovered point") {
  const Covering cov = covering_of(2, 1.2);
  CHECK_THROWS_AS(evaluate_weights(Point(2.0, 2.0), cov), CoverageError);
}

TEST_CASE("partition of unity at random points") {
  std::mt19937_64 rng(42);
  for (const auto& [per_axis, overlap] : {std::pair<std::size_t, double>{4, 1.2}, {5, 2.5}, {3, 1.6}}) {
    const Covering cov = covering_of(per_axis, overlap);
    for (const Point& x : testing::random_points(10000, rng)) {
      const WeightEvaluation we = evaluate_weights(x, cov);
      double sum = 0.0, lap = 0.0;
      Point grad = Point::Zero();
      for (std::size_t a = 0; a < we.active.size(); ++a) {
        CHECK(we.values[a] > 0.0);
        sum += we.values[a];
        grad += we.gradients[a];
        lap += we.laplacians[a];
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(grad.norm() <= 1e-8);
      CHECK(std::abs(lap) <= 1e-6);
      // Support: exactly the patches whose open disk contains x.
      for (std::size_t j = 0; j < cov.size(); ++j) {
        const bool inside = (x - cov[j].center).norm() < cov[j].radius;
        CHECK((we.value_of(j) > 0.0) == inside);
      }
    }
  }
}

TEST_CASE("weight derivatives agree with finite differences") {
  const Covering cov = covering_of(4, 1.2);
  std::mt19937_64 rng(9);
  std::size_t checked = 0;
  for (const Point& x : testing::random_points(2000, rng, 0.01, 0.99)) {
    if (distance_to_rims(cov, x) < 1e-3)
      continue;
    const WeightEvaluation we = evaluate_weights(x, cov);
    for (std::size_t a = 0; a < we.active.size(); ++a) {
      const std::size_t j = we.active[a];
      const testing::Field w = [&](const Point& y) { return evaluate_weights(y, cov).value_of(j); };
      // Weights vary on the patch scale (radius ~0.2), hence the unit floor is
      // replaced by the natural derivative scales 1/r and 1/r^2.
      const double r = cov.radius();
      CHECK(testing::rel_error(we.gradients[a], testing::fd_gradient(w, x, 1e-6), 1.0 / r) <= 1e-5);
      CHECK(testing::rel_error(we.laplacians[a], testing::fd_laplacian(w, x, 1e-4), 1.0 / (r * r)) <= 1e-5);
    }
    ++checked;
  }
  CHECK(checked > 1000);
}
