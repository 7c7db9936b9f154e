#pragma once

#include "rbfpum/common.hpp"

namespace rbfpum {

enum class KernelFamily {
  Matern6,   ///< exp(-s) (s^3 + 6 s^2 + 15 s + 15), s = eps * r
  Wendland2, ///< (1 - s)_+^4 (4 s + 1), C2 in two dimensions, support radius 1/eps
};

/// Value, gradient and Laplacian of a radial kernel at one displacement.
struct KernelSample {
  double value = 0.0;
  Point gradient = Point::Zero();
  double laplacian = 0.0;
};

/**
 * A radial kernel phi_eps(r) = phi(eps * r) together with its analytic
 * derivatives in the plane. All members are pure and thread-safe.
 */
class KernelModel {
public:
  KernelModel(KernelFamily family, double shape);

  KernelFamily family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }

  /// phi_eps(r). Throws std::domain_error for r < 0.
  double value(double r) const;

  /// Gradient with respect to x of phi_eps(|dx|), dx = x - center.
  Point gradient(const Point& dx) const;

  /// 2D Laplacian phi'' + phi'/r, with the analytic limit at r = 0.
  double laplacian(double r) const;

  /// All three quantities at once; cheaper than three separate calls.
  KernelSample sample(const Point& dx) const;

  /// phi'(r) / r, finite at r = 0.
  double derivative_over_r(double r) const;

  /// Radius beyond which the kernel vanishes identically (infinity if global).
  double support_radius() const noexcept;

private:
  KernelFamily family_;
  double shape_;
};

} // namespace rbfpum
