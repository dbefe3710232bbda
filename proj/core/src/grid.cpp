#include "abwave/grid.hpp"

#include <cmath>
#include <sstream>

#include "abwave/errors.hpp"

namespace abwave::wavefield {

Grid1D::Grid1D(std::size_t n, double extent, double origin)
    : n_(n), extent_(extent), origin_(origin) {
  std::ostringstream msg;
  if (n < 16) {
    msg << "Grid1D: need at least 16 samples (got " << n << ")";
    throw DomainError(msg.str());
  }
  if (!(extent > 0.0) || !std::isfinite(extent) || !std::isfinite(origin)) {
    msg << "Grid1D: extent must be positive and finite (got " << extent << ")";
    throw DomainError(msg.str());
  }
  if (!(first() < 0.0 && last() > 0.0)) {
    msg << "Grid1D: coordinate 0 must lie inside [" << first() << ", "
        << last() << "]";
    throw DomainError(msg.str());
  }
}

Grid1D Grid1D::centered(std::size_t n, double extent) {
  return Grid1D(n, extent, -0.5 * extent);
}

std::optional<std::size_t> Grid1D::mirror_index(std::size_t i) const {
  const double target = -coordinate(i);
  const double j = std::round((target - origin_) / spacing());
  if (j < 0.0 || j > static_cast<double>(n_ - 1)) return std::nullopt;
  const auto idx = static_cast<std::size_t>(j);
  if (std::abs(coordinate(idx) - target) > 1e-9 * spacing()) {
    return std::nullopt;
  }
  return idx;
}

bool Grid1D::same_as(const Grid1D& other, double rel_tol) const {
  if (n_ != other.n_) return false;
  const double tol = rel_tol * extent_;
  return std::abs(extent_ - other.extent_) <= tol &&
         std::abs(origin_ - other.origin_) <= tol;
}

Grid2D Grid2D::centered(std::size_t nx, std::size_t ny, double extent_x,
                        double extent_y) {
  return Grid2D(Grid1D::centered(nx, extent_x), Grid1D::centered(ny, extent_y));
}

}  // namespace abwave::wavefield
