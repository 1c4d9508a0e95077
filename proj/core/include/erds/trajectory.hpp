#pragma once

#include <cstddef>
#include <vector>

#include "erds/cylinder.hpp"
#include "erds/field.hpp"

namespace erds {

/// The unknown a = (a_1, ..., a_p) at one instant.
struct SpeciesState {
  double time = 0.0;
  std::vector<Field> species;

  const Grid& grid() const { return species.front().grid(); }
  std::size_t count() const noexcept { return species.size(); }

  /// Checks p >= 2, a shared grid, finiteness and a_i >= -tolerance.
  void validate(double negativity_tolerance) const;
  double min_value() const;
};

/// Diagnostics of one accepted step.
struct StepRecord {
  double time = 0.0;  ///< time at the end of the step
  double dt = 0.0;    ///< step actually used
  int rejected = 0;   ///< halvings before acceptance
  std::vector<double> mass;
  double entropy = 0.0;
  double dissipation = 0.0;  ///< sum_i int |grad sqrt(a_i)|^2 at step end
  double min_value = 0.0;
  /// d/dt[sum int a ln a] + 4 delta_lower * (average dissipation over the step)
  double entropy_residual = 0.0;
};

class Trajectory {
 public:
  Trajectory() = default;

  /// Appends a frame; timestamps must be strictly increasing.
  void push(SpeciesState state);
  void log_step(StepRecord record) { step_log_.push_back(std::move(record)); }

  const std::vector<SpeciesState>& states() const noexcept { return states_; }
  const std::vector<StepRecord>& step_log() const noexcept { return step_log_; }
  bool empty() const noexcept { return states_.empty(); }
  std::size_t species_count() const;
  const Grid& grid() const;
  double t_begin() const;
  double t_end() const;

  FieldSeries species_series(std::size_t i) const;

 private:
  std::vector<SpeciesState> states_;
  std::vector<StepRecord> step_log_;
};

/// Space-time L^p norm of species i over a cylinder.
double cylinder_lp_norm(const Trajectory& traj, const Cylinder& cyl, std::size_t species, double p);

}  // namespace erds
