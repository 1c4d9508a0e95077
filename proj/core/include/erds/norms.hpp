#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "erds/field.hpp"

namespace erds {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Closed ball in periodic distance.
struct Ball {
  Point center{};
  double radius = 0.0;
};

/// Integration region: the whole torus or a ball.
class Region {
 public:
  static Region all() { return Region{}; }
  static Region ball(const Point& center, double radius) { return Region{Ball{center, radius}}; }

  bool is_all() const noexcept { return !ball_.has_value(); }
  const Ball& as_ball() const { return ball_.value(); }

 private:
  Region() = default;
  explicit Region(Ball b) : ball_(b) {}
  std::optional<Ball> ball_;
};

/// Flat indices of lattice points within the ball. Throws DomainError when
/// the radius exceeds L/2.
std::vector<std::size_t> ball_points(const Grid& grid, const Ball& ball);
std::vector<std::size_t> region_points(const Grid& grid, const Region& region);

/// Lattice volume of a region: h^N times its point count.
double region_volume(const Grid& grid, const Region& region);

/// (h^N sum_{x in region} |f(x)|^p)^{1/p}; p = kInfinity gives max |f|.
double lp_norm(const Field& f, const Region& region, double p);

/// h^N sum_{x in region} f(x).
double region_integral(const Field& f, const Region& region);

/// Exact volume of the Euclidean unit ball in R^N.
double unit_ball_volume(int dim);
/// Surface measure of the unit sphere in R^N.
double unit_sphere_area(int dim);

}  // namespace erds
