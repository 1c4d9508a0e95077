#pragma once

#include <cstdint>
#include <vector>

#include "erds/field.hpp"
#include "erds/trajectory.hpp"

namespace erds {

/// A smooth random function of (t, x) with values strictly inside (lower, upper):
/// the midpoint plus a normalized sum of a few random cosine modes.
class RandomSmoothFunction {
 public:
  RandomSmoothFunction(int dim, std::uint64_t seed, double lower, double upper, int modes = 4,
                       double max_wavenumber = 1.5, bool time_dependent = false);

  double operator()(double t, const Point& x) const;
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  struct Mode {
    Point k{};
    double omega = 0.0;
    double phase = 0.0;
    double weight = 0.0;
  };
  int dim_;
  double lower_, upper_;
  std::vector<Mode> modes_;
};

/// Samples f(t, .) on every lattice point.
template <class F>
Field sample_field(const Grid& grid, const F& f, double t = 0.0) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(t, grid.position(i));
  return out;
}

/// Positive initial data: background plus `bumps` Gaussians of width sigma
/// per species, centers and amplitudes drawn from the seed.
SpeciesState random_bump_state(const Grid& grid, std::size_t species, std::uint64_t seed, double background = 0.1,
                               double amplitude = 1.0, double sigma = 1.0, int bumps = 2);

}  // namespace erds
