#include "rbfpum/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

namespace rbfpum {

std::vector<Point> PointSet::all() const {
  std::vector<Point> out;
  out.reserve(size());
  out.insert(out.end(), interior.begin(), interior.end());
  out.insert(out.end(), boundary.begin(), boundary.end());
  return out;
}

std::size_t boundary_count(std::size_t n_interior) {
  const double side = std::ceil(std::sqrt(static_cast<double>(n_interior)) + 2.0);
  return 4 * static_cast<std::size_t>(side) - 4;
}

std::vector<Point> boundary_ring(std::size_t count) {
  if (count < 4 || count % 4 != 0)
    throw ConfigError(fmt::format("boundary ring size {} is not a positive multiple of 4", count));
  const std::size_t segments = count / 4;
  const double h = 1.0 / static_cast<double>(segments);
  std::vector<Point> ring;
  ring.reserve(count);
  for (std::size_t i = 0; i < segments; ++i)
    ring.emplace_back(i * h, 0.0);
  for (std::size_t i = 0; i < segments; ++i)
    ring.emplace_back(1.0, i * h);
  for (std::size_t i = 0; i < segments; ++i)
    ring.emplace_back(1.0 - i * h, 1.0);
  for (std::size_t i = 0; i < segments; ++i)
    ring.emplace_back(0.0, 1.0 - i * h);
  return ring;
}

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv_base = 1.0 / base;
  double scale = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

std::vector<Point> HaltonStream::draw(std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i, ++next_index_)
    out.emplace_back(radical_inverse(next_index_, 2), radical_inverse(next_index_, 3));
  return out;
}

PointSet make_initial_points(int n_side, InitialLayout layout, HaltonStream* halton) {
  if (n_side < 3)
    throw ConfigError(fmt::format("n_side must be at least 3, got {}", n_side));
  const auto inner = static_cast<std::size_t>(n_side - 2);
  PointSet set;
  if (layout == InitialLayout::Grid) {
    const double h = 1.0 / (n_side - 1);
    set.interior.reserve(inner * inner);
    for (std::size_t j = 1; j <= inner; ++j)
      for (std::size_t i = 1; i <= inner; ++i)
        set.interior.emplace_back(i * h, j * h);
  } else {
    HaltonStream local;
    set.interior = (halton ? *halton : local).draw(inner * inner);
  }
  set.boundary = boundary_ring(boundary_count(set.interior.size()));
  return set;
}

// ---------------------------------------------------------------------------

PointGrid::PointGrid(std::span<const Point> points, double cell_size)
    : points_(points.begin(), points.end()) {
  if (!(cell_size > 0.0))
    throw ConfigError("grid cell size must be positive");
  cells_per_axis_ = std::clamp(static_cast<int>(std::ceil(1.0 / cell_size)), 1, 4096);
  cell_size_ = 1.0 / cells_per_axis_;

  const std::size_t ncell = static_cast<std::size_t>(cells_per_axis_) * cells_per_axis_;
  std::vector<std::size_t> cell_of(points_.size());
  cell_start_.assign(ncell + 1, 0);
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell_of[i] = static_cast<std::size_t>(cell_coord(points_[i].y())) * cells_per_axis_ +
                 cell_coord(points_[i].x());
    ++cell_start_[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c)
    cell_start_[c + 1] += cell_start_[c];
  cell_items_.resize(points_.size());
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i)
    cell_items_[fill[cell_of[i]]++] = i;
}

int PointGrid::cell_coord(double v) const {
  const double c = std::floor(v / cell_size_);
  if (!(c >= 0.0))
    return 0;
  return std::min(static_cast<int>(std::min(c, 1e9)), cells_per_axis_ - 1);
}

std::vector<std::size_t> PointGrid::within(const Point& center, double radius) const {
  std::vector<std::size_t> out;
  const int x0 = cell_coord(center.x() - radius), x1 = cell_coord(center.x() + radius);
  const int y0 = cell_coord(center.y() - radius), y1 = cell_coord(center.y() + radius);
  const double r2 = radius * radius;
  for (int cy = y0; cy <= y1; ++cy)
    for (int cx = x0; cx <= x1; ++cx) {
      const std::size_t c = static_cast<std::size_t>(cy) * cells_per_axis_ + cx;
      for (std::size_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
        const std::size_t i = cell_items_[k];
        if ((points_[i] - center).squaredNorm() <= r2)
          out.push_back(i);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<std::size_t, double> PointGrid::nearest(const Point& query) const {
  if (points_.empty())
    throw Error("nearest-point query on an empty set");
  const int qx = cell_coord(query.x()), qy = cell_coord(query.y());
  const int last = cells_per_axis_ - 1;
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();

  auto scan_cell = [&](int cx, int cy) {
    const std::size_t c = static_cast<std::size_t>(cy) * cells_per_axis_ + cx;
    for (std::size_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const std::size_t i = cell_items_[k];
      const double d2 = (points_[i] - query).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
        best_d2 = d2;
        best = i;
      }
    }
  };

  for (int ring = 0;; ++ring) {
    const int xlo = qx - ring, xhi = qx + ring, ylo = qy - ring, yhi = qy + ring;
    for (int cy = std::max(ylo, 0); cy <= std::min(yhi, last); ++cy)
      for (int cx = std::max(xlo, 0); cx <= std::min(xhi, last); ++cx)
        if (cy == ylo || cy == yhi || cx == xlo || cx == xhi)
          scan_cell(cx, cy);

    // Distance from the query to the part of the grid not yet scanned.
    double bound = std::numeric_limits<double>::infinity();
    if (xlo > 0)
      bound = std::min(bound, query.x() - xlo * cell_size_);
    if (xhi < last)
      bound = std::min(bound, (xhi + 1) * cell_size_ - query.x());
    if (ylo > 0)
      bound = std::min(bound, query.y() - ylo * cell_size_);
    if (yhi < last)
      bound = std::min(bound, (yhi + 1) * cell_size_ - query.y());
    if (bound == std::numeric_limits<double>::infinity())
      break;
    if (bound > 0.0 && best_d2 < bound * bound)
      break;
  }
  return {best, std::sqrt(best_d2)};
}

std::pair<std::size_t, double> nearest_point(const Point& query, std::span<const Point> points) {
  if (points.empty())
    throw Error("nearest-point query on an empty set");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d2 = (points[i] - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return {best, std::sqrt(best_d2)};
}

// ---------------------------------------------------------------------------

Covering::Covering(std::size_t patches_per_axis, double overlap, std::vector<Patch> patches,
                   std::vector<std::vector<std::size_t>> patches_of_point)
    : per_axis_(patches_per_axis), overlap_(overlap),
      radius_(covering_radius(patches_per_axis, overlap)), patches_(std::move(patches)),
      patches_of_point_(std::move(patches_of_point)) {}

std::vector<std::size_t> Covering::containing(const Point& x) const {
  std::vector<std::size_t> out;
  const double p = static_cast<double>(per_axis_);
  const auto lo = [&](double v) {
    return static_cast<long>(std::max(0.0, std::floor((v - radius_) * p - 0.5)));
  };
  const auto hi = [&](double v) {
    return static_cast<long>(std::min(p - 1.0, std::ceil((v + radius_) * p - 0.5)));
  };
  const double r2 = radius_ * radius_;
  for (long j = lo(x.y()); j <= hi(x.y()); ++j)
    for (long i = lo(x.x()); i <= hi(x.x()); ++i) {
      const std::size_t idx = static_cast<std::size_t>(j) * per_axis_ + static_cast<std::size_t>(i);
      if ((patches_[idx].center - x).squaredNorm() < r2)
        out.push_back(idx);
    }
  return out;
}

double covering_radius(std::size_t patches_per_axis, double overlap) {
  return overlap * std::sqrt(2.0) / (2.0 * static_cast<double>(patches_per_axis));
}

std::size_t default_patches_per_axis(std::size_t num_points) {
  const auto p = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(num_points)) / 2.0));
  return std::max<std::size_t>(2, p);
}

Covering build_covering(const PointSet& points, std::size_t patches_per_axis, double overlap) {
  if (patches_per_axis < 1)
    throw ConfigError("patches_per_axis must be at least 1");
  if (!(overlap >= 1.0))
    throw ConfigError("overlap factor must be at least 1");

  const double radius = covering_radius(patches_per_axis, overlap);
  const std::vector<Point> all = points.all();
  const PointGrid grid(all, radius);

  std::vector<Patch> patches;
  patches.reserve(patches_per_axis * patches_per_axis);
  std::vector<std::vector<std::size_t>> of_point(all.size());
  const double h = 1.0 / static_cast<double>(patches_per_axis);
  for (std::size_t j = 0; j < patches_per_axis; ++j)
    for (std::size_t i = 0; i < patches_per_axis; ++i) {
      Patch patch;
      patch.center = Point((i + 0.5) * h, (j + 0.5) * h);
      patch.radius = radius;
      patch.members = grid.within(patch.center, radius);
      if (patch.members.size() < 3)
        throw CoverageError(fmt::format(
            "patch {} has {} member(s); use fewer patches per axis", patches.size(),
            patch.members.size()));
      for (std::size_t m : patch.members)
        of_point[m].push_back(patches.size());
      patches.push_back(std::move(patch));
    }

  for (std::size_t k = 0; k < all.size(); ++k)
    if (of_point[k].empty())
      throw CoverageError(fmt::format("collocation point {} lies in no patch", k));
  return Covering(patches_per_axis, overlap, std::move(patches), std::move(of_point));
}

void write_points_csv(const std::filesystem::path& path, const PointSet& points,
                      std::span<const Point> test_points) {
  std::ofstream out(path);
  if (!out)
    throw Error(fmt::format("cannot open {} for writing", path.string()));
  out << "x,y,kind\n";
  auto emit = [&](const std::vector<Point>& pts, const char* kind) {
    for (const Point& p : pts)
      out << fmt::format("{:.17g},{:.17g},{}\n", p.x(), p.y(), kind);
  };
  emit(points.interior, "interior");
  emit(points.boundary, "boundary");
  for (const Point& p : test_points)
    out << fmt::format("{:.17g},{:.17g},test\n", p.x(), p.y());
}

} // namespace rbfpum
