#include "erds/random_fields.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "erds/errors.hpp"

namespace erds {

RandomSmoothFunction::RandomSmoothFunction(int dim, std::uint64_t seed, double lower, double upper, int modes,
                                           double max_wavenumber, bool time_dependent)
    : dim_(dim), lower_(lower), upper_(upper) {
  if (!(lower < upper)) throw DomainError("RandomSmoothFunction: need lower < upper");
  if (modes < 1) throw DomainError("RandomSmoothFunction: need at least one mode");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> wave(-max_wavenumber, max_wavenumber);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  double total = 0.0;
  for (int m = 0; m < modes; ++m) {
    Mode mode;
    for (int a = 0; a < dim; ++a) mode.k[static_cast<std::size_t>(a)] = wave(rng);
    mode.omega = time_dependent ? wave(rng) : 0.0;
    mode.phase = phase(rng);
    mode.weight = weight(rng);
    total += mode.weight;
    modes_.push_back(mode);
  }
  // Leave a 5% margin so values stay strictly inside the bounds.
  for (auto& mode : modes_) mode.weight *= 0.95 / total;
}

double RandomSmoothFunction::operator()(double t, const Point& x) const {
  double s = 0.0;
  for (const auto& m : modes_) {
    double arg = m.omega * t + m.phase;
    for (int a = 0; a < dim_; ++a) arg += m.k[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
    s += m.weight * std::cos(arg);
  }
  return 0.5 * (lower_ + upper_) + 0.5 * (upper_ - lower_) * s;
}

SpeciesState random_bump_state(const Grid& grid, std::size_t species, std::uint64_t seed, double background,
                               double amplitude, double sigma, int bumps) {
  std::mt19937_64 rng(seed);
  const double half = 0.25 * grid.length();
  std::uniform_real_distribution<double> pos(-half, half);
  std::uniform_real_distribution<double> amp(0.5 * amplitude, amplitude);
  SpeciesState state;
  for (std::size_t i = 0; i < species; ++i) {
    std::vector<std::pair<Point, double>> centers;
    for (int b = 0; b < bumps; ++b) {
      Point c{};
      for (int a = 0; a < grid.dim(); ++a) c[static_cast<std::size_t>(a)] = pos(rng);
      centers.emplace_back(c, amp(rng));
    }
    Field f(grid, background);
    for (std::size_t x = 0; x < f.size(); ++x) {
      const Point p = grid.position(x);
      for (const auto& [c, a] : centers) {
        const double r = grid.periodic_distance(p, c);
        f[x] += a * std::exp(-r * r / (2.0 * sigma * sigma));
      }
    }
    state.species.push_back(std::move(f));
  }
  return state;
}

}  // namespace erds
