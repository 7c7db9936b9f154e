#include "rbfpum/kernels.hpp"

#include <cmath>
#include <limits>

namespace rbfpum {

namespace {

void check_radius(double r) {
  if (!(r >= 0.0))
    throw std::domain_error("kernel evaluated at negative radius");
}

} // namespace

KernelModel::KernelModel(KernelFamily family, double shape)
    : family_(family), shape_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw ConfigError("kernel shape parameter must be positive and finite");
}

double KernelModel::support_radius() const noexcept {
  if (family_ == KernelFamily::Wendland2)
    return 1.0 / shape_;
  return std::numeric_limits<double>::infinity();
}

double KernelModel::value(double r) const {
  check_radius(r);
  const double s = shape_ * r;
  switch (family_) {
  case KernelFamily::Matern6:
    return std::exp(-s) * (((s + 6.0) * s + 15.0) * s + 15.0);
  case KernelFamily::Wendland2: {
    if (s >= 1.0)
      return 0.0;
    const double t = 1.0 - s;
    const double t2 = t * t;
    return t2 * t2 * (4.0 * s + 1.0);
  }
  }
  return 0.0;
}

double KernelModel::derivative_over_r(double r) const {
  check_radius(r);
  const double s = shape_ * r;
  const double e2 = shape_ * shape_;
  switch (family_) {
  case KernelFamily::Matern6:
    // phi'(r) = -eps s exp(-s) (s^2 + 3 s + 3)
    return -e2 * std::exp(-s) * ((s + 3.0) * s + 3.0);
  case KernelFamily::Wendland2: {
    // phi'(r) = -20 eps s (1 - s)^3
    if (s >= 1.0)
      return 0.0;
    const double t = 1.0 - s;
    return -20.0 * e2 * t * t * t;
  }
  }
  return 0.0;
}

double KernelModel::laplacian(double r) const {
  check_radius(r);
  const double s = shape_ * r;
  const double e2 = shape_ * shape_;
  switch (family_) {
  case KernelFamily::Matern6:
    return e2 * std::exp(-s) * (((s - 1.0) * s - 6.0) * s - 6.0);
  case KernelFamily::Wendland2: {
    if (s >= 1.0)
      return 0.0;
    const double t = 1.0 - s;
    return 20.0 * e2 * t * t * (5.0 * s - 2.0);
  }
  }
  return 0.0;
}

Point KernelModel::gradient(const Point& dx) const {
  return derivative_over_r(dx.norm()) * dx;
}

KernelSample KernelModel::sample(const Point& dx) const {
  const double r = dx.norm();
  const double s = shape_ * r;
  const double e2 = shape_ * shape_;
  KernelSample out;
  switch (family_) {
  case KernelFamily::Matern6: {
    const double ex = std::exp(-s);
    out.value = ex * (((s + 6.0) * s + 15.0) * s + 15.0);
    out.gradient = (-e2 * ex * ((s + 3.0) * s + 3.0)) * dx;
    out.laplacian = e2 * ex * (((s - 1.0) * s - 6.0) * s - 6.0);
    break;
  }
  case KernelFamily::Wendland2: {
    if (s >= 1.0)
      break;
    const double t = 1.0 - s;
    const double t2 = t * t;
    out.value = t2 * t2 * (4.0 * s + 1.0);
    out.gradient = (-20.0 * e2 * t2 * t) * dx;
    out.laplacian = 20.0 * e2 * t2 * (5.0 * s - 2.0);
    break;
  }
  }
  return out;
}

} // namespace rbfpum
