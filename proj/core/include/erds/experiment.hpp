#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "erds/config.hpp"
#include "erds/trajectory.hpp"

namespace erds {

struct RescaleRow {
  double eps = 0.0;
  double source_residual = 0.0;    ///< ||r||_{L^2} of the source at t - 2 eps^2
  double rescaled_residual = 0.0;  ///< ||r^(eps)||_{L^2} at s = -2
  double ratio = 0.0;
  double predicted_ratio = 0.0;    ///< eps^{2/(q-1) + 2 - N/2}
};

/// Residuals of the zoomed trajectories against the source residual at the
/// matching time. Scales whose window the trajectory does not cover are skipped.
std::vector<RescaleRow> rescale_study(const Trajectory& traj, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                                      const Point& center, double center_t, const std::vector<double>& eps_list,
                                      double q);

/// Initial data described by the config's [initial] section.
SpeciesState initial_state(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunResult {
  int exit_status = 0;
  std::string summary_json;
  std::filesystem::path output_dir;
  std::vector<std::string> failed_invariants;
};

/// Simulates, runs every requested analysis and writes diagnostics.csv, frame
/// files, one CSV per analysis and summary.json (written last) into cfg.output.
/// The exit status is nonzero iff a hard invariant fails.
RunResult run_experiment(const ExperimentConfig& cfg);

/// Same analyses on a stored trajectory (see write_trajectory).
RunResult analyze_trajectory(const ExperimentConfig& cfg, const Trajectory& traj);

}  // namespace erds
