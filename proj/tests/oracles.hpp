// Independent reference computations used only by the tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "rbfpum/common.hpp"

namespace rbfpum::testing {

using Field = std::function<double(const Point&)>;

/// Second-order central difference of the gradient.
inline Point fd_gradient(const Field& f, const Point& x, double h) {
  const Point ex(h, 0.0), ey(0.0, h);
  return Point((f(x + ex) - f(x - ex)) / (2.0 * h), (f(x + ey) - f(x - ey)) / (2.0 * h));
}

/// Five-point Laplacian stencil (second order).
inline double fd_laplacian5(const Field& f, const Point& x, double h) {
  const Point ex(h, 0.0), ey(0.0, h);
  return (f(x + ex) + f(x - ex) + f(x + ey) + f(x - ey) - 4.0 * f(x)) / (h * h);
}

/// Fourth-order Laplacian: five-point second differences along each axis.
inline double fd_laplacian(const Field& f, const Point& x, double h) {
  auto d2 = [&](const Point& e) {
    return (-f(x + 2.0 * e) + 16.0 * f(x + e) - 30.0 * f(x) + 16.0 * f(x - e) - f(x - 2.0 * e)) /
           (12.0 * h * h);
  };
  return d2(Point(h, 0.0)) + d2(Point(0.0, h));
}

/// |a - b| / max(|b|, floor).
inline double rel_error(double a, double b, double floor = 1.0) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

inline double rel_error(const Point& a, const Point& b, double floor = 1.0) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

/// Exhaustive fixed-radius query.
inline std::vector<std::size_t> brute_within(const std::vector<Point>& pts, const Point& c,
                                             double r) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if ((pts[i] - c).squaredNorm() <= r * r)
      out.push_back(i);
  return out;
}

/// Base-b digit reversal computed with exact integer arithmetic.
inline double radical_inverse_exact(unsigned long index, unsigned base) {
  unsigned long num = 0, den = 1;
  while (index > 0) {
    num = num * base + index % base;
    den *= base;
    index /= base;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

inline std::vector<Point> random_points(std::size_t n, std::mt19937_64& rng, double lo = 0.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> pts(n);
  for (auto& p : pts)
    p = Point(u(rng), u(rng));
  return pts;
}

} // namespace rbfpum::testing
