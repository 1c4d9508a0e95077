#include "erds/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "erds/errors.hpp"

namespace erds {

std::vector<std::size_t> ball_points(const Grid& grid, const Ball& ball) {
  if (!(ball.radius >= 0.0)) throw DomainError("ball radius must be nonnegative");
  if (ball.radius > 0.5 * grid.length() * (1.0 + 1e-12))
    throw DomainError("ball radius exceeds L/2; periodic wrap would double-count");
  std::vector<std::size_t> pts;
  const double r2 = ball.radius * ball.radius * (1.0 + 1e-12);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.position(i);
    double s = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      const double dx = grid.periodic_delta(x[d] - ball.center[d]);
      s += dx * dx;
    }
    if (s <= r2) pts.push_back(i);
  }
  return pts;
}

std::vector<std::size_t> region_points(const Grid& grid, const Region& region) {
  if (region.is_all()) {
    std::vector<std::size_t> pts(grid.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = i;
    return pts;
  }
  return ball_points(grid, region.as_ball());
}

double region_volume(const Grid& grid, const Region& region) {
  if (region.is_all()) return grid.cell_volume() * static_cast<double>(grid.size());
  return grid.cell_volume() * static_cast<double>(ball_points(grid, region.as_ball()).size());
}

double lp_norm(const Field& f, const Region& region, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm requires p >= 1");
  const auto pts = region_points(f.grid(), region);
  if (p == kInfinity) {
    double m = 0.0;
    for (auto i : pts) m = std::max(m, std::abs(f[i]));
    return m;
  }
  double s = 0.0;
  if (p == 1.0) {
    for (auto i : pts) s += std::abs(f[i]);
    return f.grid().cell_volume() * s;
  }
  for (auto i : pts) s += std::pow(std::abs(f[i]), p);
  return std::pow(f.grid().cell_volume() * s, 1.0 / p);
}

double region_integral(const Field& f, const Region& region) {
  double s = 0.0;
  for (auto i : region_points(f.grid(), region)) s += f[i];
  return f.grid().cell_volume() * s;
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double unit_sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

}  // namespace erds
