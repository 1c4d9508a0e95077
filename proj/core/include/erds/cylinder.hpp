#pragma once

#include <vector>

#include "erds/field.hpp"
#include "erds/norms.hpp"

namespace erds {

/// Parabolic cylinder Q_rho = (anchor - rho^2, anchor) x B_rho(center).
struct Cylinder {
  double radius = 1.0;
  Point center{};
  double anchor_t = 0.0;

  double t_begin() const noexcept { return anchor_t - radius * radius; }
  double t_end() const noexcept { return anchor_t; }
  Ball ball() const noexcept { return Ball{center, radius}; }
  /// Space-time measure rho^2 * |B_rho| (exact, not the lattice count).
  double measure(int dim) const;
};

struct TimedField {
  double time;
  Field field;
};

/// Time-ordered sequence of fields sharing one grid.
using FieldSeries = std::vector<TimedField>;

/// Linear interpolation in time between bracketing frames.
Field field_at(const FieldSeries& series, double t);

/// Throws CoverageError unless the series spans [t0, t1].
void require_coverage(const FieldSeries& series, double t0, double t1, const char* what);

/// Space-time L^p norm over the cylinder: lattice sum in space, trapezoid in
/// time (frames inside the window plus interpolated endpoint frames).
double cylinder_lp_norm(const FieldSeries& series, const Cylinder& cyl, double p);

/// sup - inf over all lattice samples in the cylinder (frames inside the
/// closed window plus interpolated endpoints).
double sup_oscillation(const FieldSeries& series, const Cylinder& cyl);

}  // namespace erds
