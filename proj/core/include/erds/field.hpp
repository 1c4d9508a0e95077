#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "erds/grid.hpp"

namespace erds {

/// Scalar samples on a Grid. Values must stay finite.
class Field {
 public:
  explicit Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values);

  static Field from_function(const Grid& grid, const std::function<double(const Point&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  /// h^N * sum of values (midpoint rule on the lattice).
  double integral() const noexcept;
  double max() const noexcept;
  double min() const noexcept;

  /// Throws DomainError if any value is NaN or infinite.
  void require_finite(const char* what) const;

  Field& operator+=(const Field& other);
  Field& operator*=(double s) noexcept;

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator*(double s, Field a);

}  // namespace erds
