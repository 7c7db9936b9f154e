#include "rbfpum/pum_weights.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rbfpum/kernels.hpp"

namespace rbfpum {

double WeightEvaluation::value_of(std::size_t patch) const {
  const auto it = std::lower_bound(active.begin(), active.end(), patch);
  if (it == active.end() || *it != patch)
    return 0.0;
  return values[static_cast<std::size_t>(it - active.begin())];
}

WeightEvaluation evaluate_weights(const Point& x, const Covering& covering) {
  WeightEvaluation out;
  out.active = covering.containing(x);
  if (out.active.empty())
    throw CoverageError(fmt::format("point ({}, {}) is not covered by any patch", x.x(), x.y()));

  const std::size_t n = out.active.size();
  std::vector<KernelSample> psi(n);
  double sum = 0.0, sum_lap = 0.0;
  Point sum_grad = Point::Zero();
  for (std::size_t a = 0; a < n; ++a) {
    const Patch& patch = covering[out.active[a]];
    const KernelModel generator(KernelFamily::Wendland2, 1.0 / patch.radius);
    psi[a] = generator.sample(x - patch.center);
    sum += psi[a].value;
    sum_grad += psi[a].gradient;
    sum_lap += psi[a].laplacian;
  }

  out.values.resize(n);
  out.gradients.resize(n);
  out.laplacians.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double w = psi[a].value / sum;
    const Point gw = (psi[a].gradient - w * sum_grad) / sum;
    out.values[a] = w;
    out.gradients[a] = gw;
    out.laplacians[a] = (psi[a].laplacian - 2.0 * gw.dot(sum_grad) - w * sum_lap) / sum;
  }
  return out;
}

} // namespace rbfpum
