#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "rbfpum/common.hpp"

namespace rbfpum {

enum class InitialLayout { Grid, Halton };

/**
 * Collocation points on the unit square. Global indices run over the
 * interior points first, then the boundary points.
 */
struct PointSet {
  std::vector<Point> interior;
  std::vector<Point> boundary;

  std::size_t num_interior() const noexcept { return interior.size(); }
  std::size_t num_boundary() const noexcept { return boundary.size(); }
  std::size_t size() const noexcept { return interior.size() + boundary.size(); }

  bool is_boundary(std::size_t index) const noexcept { return index >= interior.size(); }
  const Point& operator[](std::size_t index) const {
    return index < interior.size() ? interior[index] : boundary[index - interior.size()];
  }

  /// Interior followed by boundary, in global index order.
  std::vector<Point> all() const;
};

/// Number of boundary nodes paired with n_interior interior nodes:
/// 4 * ceil(sqrt(n_interior) + 2) - 4.
std::size_t boundary_count(std::size_t n_interior);

/// Equispaced ring on the boundary of the unit square including the four
/// corners. count must be a positive multiple of 4.
std::vector<Point> boundary_ring(std::size_t count);

/// Radical inverse of index in the given base.
double radical_inverse(std::uint64_t index, unsigned base);

/// Two-dimensional Halton sequence in bases 2 and 3. Not thread-safe.
class HaltonStream {
public:
  explicit HaltonStream(std::uint64_t first_index = 1) : next_index_(first_index) {}

  std::vector<Point> draw(std::size_t count);
  std::uint64_t next_index() const noexcept { return next_index_; }

private:
  std::uint64_t next_index_;
};

/// Initial collocation set: (n_side - 2)^2 interior points on a uniform grid
/// or drawn from `halton`, plus the boundary ring from boundary_count().
PointSet make_initial_points(int n_side, InitialLayout layout, HaltonStream* halton = nullptr);

/// Uniform bucket grid over the unit square used for fixed-radius and
/// nearest-neighbor queries. Points outside the square are clamped into the
/// border cells.
class PointGrid {
public:
  PointGrid(std::span<const Point> points, double cell_size);

  /// Indices of points with |p - center| <= radius, ascending.
  std::vector<std::size_t> within(const Point& center, double radius) const;

  /// Nearest point; ties go to the smallest index. Returns (index, distance).
  std::pair<std::size_t, double> nearest(const Point& query) const;

  std::size_t size() const noexcept { return points_.size(); }

private:
  int cell_coord(double v) const;

  std::vector<Point> points_;
  double cell_size_;
  int cells_per_axis_;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> cell_items_;
};

/// Nearest point by exhaustive scan. Ties go to the smallest index.
std::pair<std::size_t, double> nearest_point(const Point& query, std::span<const Point> points);

/// A circular subdomain and the global indices of the collocation points in it.
struct Patch {
  Point center;
  double radius = 0.0;
  std::vector<std::size_t> members; ///< ascending; doubles as the local-to-global map
};

/// Patches on a regular grid of centers, with a shared radius.
class Covering {
public:
  Covering(std::size_t patches_per_axis, double overlap, std::vector<Patch> patches,
           std::vector<std::vector<std::size_t>> patches_of_point);

  std::size_t patches_per_axis() const noexcept { return per_axis_; }
  double overlap() const noexcept { return overlap_; }
  double radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return patches_.size(); }
  const Patch& operator[](std::size_t j) const { return patches_[j]; }
  const std::vector<Patch>& patches() const noexcept { return patches_; }

  /// Patches (ascending) whose open disk contains x, i.e. where the weight is positive.
  std::vector<std::size_t> containing(const Point& x) const;

  /// Patches (ascending) listing collocation point `index` as a member.
  const std::vector<std::size_t>& patches_of_point(std::size_t index) const {
    return patches_of_point_.at(index);
  }

private:
  std::size_t per_axis_;
  double overlap_;
  double radius_;
  std::vector<Patch> patches_;
  std::vector<std::vector<std::size_t>> patches_of_point_;
};

/// Radius of the patches in a covering: overlap * sqrt(2) / (2 * patches_per_axis).
double covering_radius(std::size_t patches_per_axis, double overlap);

/// Default number of patches per axis for N collocation points: max(2, round(sqrt(N) / 2)).
std::size_t default_patches_per_axis(std::size_t num_points);

/// Builds the covering; membership is |x - center| <= radius. Throws
/// CoverageError if some patch has fewer than three members or some point is
/// left uncovered.
Covering build_covering(const PointSet& points, std::size_t patches_per_axis, double overlap);

/// Writes `x,y,kind` rows (interior, boundary, then test points).
void write_points_csv(const std::filesystem::path& path, const PointSet& points,
                      std::span<const Point> test_points = {});

} // namespace rbfpum
