#include "erds/grid.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "erds/errors.hpp"

namespace erds {

Grid::Grid(int dim, int points_per_axis, double box_length)
    : dim_(dim), n_(points_per_axis), length_(box_length), size_(1) {
  if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  if (points_per_axis < 8 || !std::has_single_bit(static_cast<unsigned>(points_per_axis)))
    throw DomainError("points per axis must be a power of two >= 8");
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw DomainError("box length must be positive");
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_);
}

double Grid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

Index3 Grid::unflatten(std::size_t flat) const noexcept {
  Index3 idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

std::size_t Grid::flatten(const Index3& idx) const noexcept {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[d]);
  return flat;
}

std::size_t Grid::wrapped(const Index3& idx) const noexcept {
  Index3 w{0, 0, 0};
  for (int d = 0; d < dim_; ++d) w[d] = ((idx[d] % n_) + n_) % n_;
  return flatten(w);
}

Point Grid::position(std::size_t flat) const noexcept {
  const Index3 idx = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < dim_; ++d) p[d] = coordinate(idx[d]);
  return p;
}

Index3 Grid::nearest_index(const Point& x) const noexcept {
  Index3 idx{0, 0, 0};
  for (int d = 0; d < dim_; ++d) {
    const long i = std::lround(x[d] / spacing()) + n_ / 2;
    idx[d] = static_cast<int>(((i % n_) + n_) % n_);
  }
  return idx;
}

double Grid::periodic_delta(double dx) const noexcept {
  return dx - length_ * std::floor(dx / length_ + 0.5);
}

double Grid::periodic_distance(const Point& a, const Point& b) const noexcept {
  double s = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double dx = periodic_delta(a[d] - b[d]);
    s += dx * dx;
  }
  return std::sqrt(s);
}

bool Grid::operator==(const Grid& other) const noexcept {
  return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << "N=" << dim_ << " n=" << n_ << " L=" << length_;
  return os.str();
}

}  // namespace erds
