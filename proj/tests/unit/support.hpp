#pragma once

#include <functional>

#include "erds/trajectory.hpp"

namespace erds::testing {

/// Two-species trajectory with a[0](t, x) = f(t, x) and a[1] = g(t, x) on frames t0, t0 + dt, ..., t1.
inline Trajectory make_trajectory(const Grid& g, double t0, double t1, double dt,
                                  const std::function<double(double, const Point&)>& f,
                                  const std::function<double(double, const Point&)>& second = {}) {
  Trajectory traj;
  const auto steps = static_cast<int>(std::llround((t1 - t0) / dt));
  for (int k = 0; k <= steps; ++k) {
    const double t = t0 + (t1 - t0) * k / steps;
    SpeciesState s;
    s.time = t;
    s.species.push_back(Field::from_function(g, [&](const Point& x) { return f(t, x); }));
    s.species.push_back(second ? Field::from_function(g, [&](const Point& x) { return second(t, x); }) : Field(g));
    traj.push(std::move(s));
  }
  return traj;
}

inline double r2(const Point& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

}  // namespace erds::testing
