#include "erds/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "erds/errors.hpp"

namespace erds {

Field::Field(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("field size does not match grid");
}

Field Field::from_function(const Grid& grid, const std::function<double(const Point&)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out.values_[i] = f(grid.position(i));
  return out;
}

double Field::integral() const noexcept {
  return grid_.cell_volume() * std::accumulate(values_.begin(), values_.end(), 0.0);
}

double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }
double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

void Field::require_finite(const char* what) const {
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite field value");
}

Field& Field::operator+=(const Field& other) {
  if (!(grid_ == other.grid_)) throw DomainError("field grids differ");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator*(double s, Field a) { return a *= s; }

}  // namespace erds
