#include "erds/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "erds/errors.hpp"

namespace erds {

namespace {

double time_tolerance(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

// Time nodes for a window: interpolated endpoints plus every frame strictly inside.
std::vector<TimedField> window_frames(const FieldSeries& series, double t0, double t1) {
  std::vector<TimedField> nodes;
  nodes.push_back({t0, field_at(series, t0)});
  for (const auto& f : series)
    if (f.time > t0 + time_tolerance(t0) && f.time < t1 - time_tolerance(t1)) nodes.push_back(f);
  if (t1 > t0) nodes.push_back({t1, field_at(series, t1)});
  return nodes;
}

}  // namespace

double Cylinder::measure(int dim) const {
  return radius * radius * unit_ball_volume(dim) * std::pow(radius, dim);
}

void require_coverage(const FieldSeries& series, double t0, double t1, const char* what) {
  if (series.empty()) throw CoverageError(t0, t1, what);
  const double first = series.front().time;
  const double last = series.back().time;
  if (first > t0 + time_tolerance(t0)) throw CoverageError(t0, std::min(first, t1), what);
  if (last < t1 - time_tolerance(t1)) throw CoverageError(std::max(last, t0), t1, what);
}

Field field_at(const FieldSeries& series, double t) {
  require_coverage(series, t, t, "field_at");
  auto it = std::lower_bound(series.begin(), series.end(), t,
                             [](const TimedField& f, double time) { return f.time < time; });
  if (it == series.end()) return series.back().field;
  if (std::abs(it->time - t) <= time_tolerance(t) || it == series.begin()) return it->field;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (std::abs(lo.time - t) <= time_tolerance(t)) return lo.field;
  const double w = (t - lo.time) / (hi.time - lo.time);
  Field out(lo.field.grid());
  auto a = lo.field.values();
  auto b = hi.field.values();
  auto o = out.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = (1.0 - w) * a[i] + w * b[i];
  return out;
}

double cylinder_lp_norm(const FieldSeries& series, const Cylinder& cyl, double p) {
  if (!(p >= 1.0)) throw DomainError("cylinder_lp_norm requires p >= 1");
  if (!(cyl.radius > 0.0)) throw DomainError("cylinder radius must be positive");
  require_coverage(series, cyl.t_begin(), cyl.t_end(), "cylinder_lp_norm");
  const auto nodes = window_frames(series, cyl.t_begin(), cyl.t_end());
  const auto pts = ball_points(nodes.front().field.grid(), cyl.ball());
  const double hN = nodes.front().field.grid().cell_volume();

  if (p == kInfinity) {
    double m = 0.0;
    for (const auto& node : nodes)
      for (auto i : pts) m = std::max(m, std::abs(node.field[i]));
    return m;
  }
  std::vector<double> slice(nodes.size(), 0.0);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double s = 0.0;
    for (auto i : pts) s += std::pow(std::abs(nodes[k].field[i]), p);
    slice[k] = hN * s;
  }
  double total = 0.0;
  for (std::size_t k = 1; k < nodes.size(); ++k)
    total += 0.5 * (slice[k] + slice[k - 1]) * (nodes[k].time - nodes[k - 1].time);
  return std::pow(total, 1.0 / p);
}

double sup_oscillation(const FieldSeries& series, const Cylinder& cyl) {
  require_coverage(series, cyl.t_begin(), cyl.t_end(), "sup_oscillation");
  const auto nodes = window_frames(series, cyl.t_begin(), cyl.t_end());
  const auto pts = ball_points(nodes.front().field.grid(), cyl.ball());
  if (pts.empty()) throw DomainError("sup_oscillation: cylinder contains no lattice samples");
  double hi = -kInfinity;
  double lo = kInfinity;
  for (const auto& node : nodes)
    for (auto i : pts) {
      hi = std::max(hi, node.field[i]);
      lo = std::min(lo, node.field[i]);
    }
  return hi - lo;
}

}  // namespace erds
