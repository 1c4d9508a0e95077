#include "erds/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "erds/errors.hpp"

namespace erds {

void SpeciesState::validate(double negativity_tolerance) const {
  if (species.size() < 2) throw DomainError("a species state needs at least two species");
  const Grid& g = species.front().grid();
  for (std::size_t i = 0; i < species.size(); ++i) {
    if (!(species[i].grid() == g)) throw DomainError("species do not share one grid");
    species[i].require_finite("species state");
    if (species[i].min() < -negativity_tolerance)
      throw DomainError("species " + std::to_string(i + 1) + " has values below -tolerance");
  }
}

double SpeciesState::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& f : species) m = std::min(m, f.min());
  return m;
}

void Trajectory::push(SpeciesState state) {
  if (!states_.empty()) {
    if (!(state.time > states_.back().time)) throw DomainError("trajectory timestamps must increase strictly");
    if (state.species.size() != states_.front().species.size())
      throw DomainError("species count changed along the trajectory");
  }
  states_.push_back(std::move(state));
}

std::size_t Trajectory::species_count() const {
  if (states_.empty()) throw DomainError("empty trajectory");
  return states_.front().species.size();
}

const Grid& Trajectory::grid() const {
  if (states_.empty()) throw DomainError("empty trajectory");
  return states_.front().grid();
}

double Trajectory::t_begin() const {
  if (states_.empty()) throw DomainError("empty trajectory");
  return states_.front().time;
}

double Trajectory::t_end() const {
  if (states_.empty()) throw DomainError("empty trajectory");
  return states_.back().time;
}

FieldSeries Trajectory::species_series(std::size_t i) const {
  FieldSeries out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back({s.time, s.species.at(i)});
  return out;
}

double cylinder_lp_norm(const Trajectory& traj, const Cylinder& cyl, std::size_t species, double p) {
  return cylinder_lp_norm(traj.species_series(species), cyl, p);
}

}  // namespace erds
