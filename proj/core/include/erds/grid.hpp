#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace erds {

/// A point of R^N stored in a fixed three-slot array; unused slots are zero.
using Point = std::array<double, 3>;
using Index3 = std::array<int, 3>;

/// Uniform periodic lattice on the torus [-L/2, L/2)^N.
///
/// Lattice index i on every axis sits at coordinate (i - n/2) * h, so the
/// origin is always a lattice point. Storage is row-major with axis 0
/// slowest.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double box_length);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / n_; }
  std::size_t size() const noexcept { return size_; }
  double cell_volume() const noexcept;

  double coordinate(int index) const noexcept { return (index - n_ / 2) * spacing(); }
  Index3 unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const Index3& idx) const noexcept;
  /// Flat index of the lattice point with periodic wrapping on each axis.
  std::size_t wrapped(const Index3& idx) const noexcept;
  Point position(std::size_t flat) const noexcept;

  /// Nearest lattice point to x (periodic).
  Index3 nearest_index(const Point& x) const noexcept;

  /// Minimum-image displacement along one axis, in [-L/2, L/2).
  double periodic_delta(double dx) const noexcept;
  /// Euclidean distance on the torus.
  double periodic_distance(const Point& a, const Point& b) const noexcept;

  bool operator==(const Grid& other) const noexcept;

  std::string describe() const;

 private:
  int dim_;
  int n_;
  double length_;
  std::size_t size_;
};

}  // namespace erds
