#pragma once

#include <cstddef>
#include <optional>

namespace abwave::wavefield {

/// Uniform 1-D sampling: coordinate(i) = origin + i * spacing, with
/// spacing = extent / n. The flux line sits at coordinate 0, which must lie
/// strictly inside the sampled range.
class Grid1D {
 public:
  Grid1D(std::size_t n, double extent, double origin);

  /// origin = -extent / 2, so sample n/2 sits exactly on 0 for even n and
  /// samples i and n-i are mirror images.
  static Grid1D centered(std::size_t n, double extent);

  std::size_t size() const { return n_; }
  double extent() const { return extent_; }
  double origin() const { return origin_; }
  double spacing() const { return extent_ / static_cast<double>(n_); }
  double coordinate(std::size_t i) const {
    return origin_ + static_cast<double>(i) * spacing();
  }
  double first() const { return origin_; }
  double last() const { return coordinate(n_ - 1); }
  /// Measure of one sample for Riemann sums.
  double cell_measure() const { return spacing(); }

  /// Index j with coordinate(j) == -coordinate(i) to within 1e-9 spacing.
  std::optional<std::size_t> mirror_index(std::size_t i) const;

  bool same_as(const Grid1D& other, double rel_tol = 1e-12) const;

 private:
  std::size_t n_;
  double extent_;
  double origin_;
};

/// Tensor-product grid; values are stored row-major with x fastest.
class Grid2D {
 public:
  Grid2D(Grid1D x, Grid1D y) : x_(x), y_(y) {}
  static Grid2D centered(std::size_t nx, std::size_t ny, double extent_x,
                         double extent_y);

  const Grid1D& x() const { return x_; }
  const Grid1D& y() const { return y_; }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t size() const { return nx() * ny(); }
  std::size_t index(std::size_t ix, std::size_t iy) const {
    return iy * nx() + ix;
  }
  double cell_measure() const { return x_.spacing() * y_.spacing(); }
  bool same_as(const Grid2D& other, double rel_tol = 1e-12) const {
    return x_.same_as(other.x_, rel_tol) && y_.same_as(other.y_, rel_tol);
  }

 private:
  Grid1D x_;
  Grid1D y_;
};

}  // namespace abwave::wavefield
