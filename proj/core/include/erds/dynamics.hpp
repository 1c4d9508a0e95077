#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "erds/errors.hpp"
#include "erds/fft.hpp"
#include "erds/kinetics.hpp"
#include "erds/trajectory.hpp"

namespace erds {

/// Constant scalar diffusion coefficients with 0 < lower <= d_i <= upper.
struct DiffusionCoeffs {
  std::vector<double> d;
  double lower = 0.0;
  double upper = 0.0;

  DiffusionCoeffs(std::vector<double> d, double lower, double upper);
  /// Bounds taken as min and max of d.
  static DiffusionCoeffs tight(std::vector<double> d);

  bool all_equal() const noexcept;
  std::size_t size() const noexcept { return d.size(); }
};

enum class Scheme { explicit_fd, imex_spectral };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme scheme);

struct SimConfig {
  double dt_init = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::imex_spectral;
  double negativity_tolerance = 1e-12;
  int max_rejects = 10;
  /// A frame is stored every `output_cadence` nominal steps (and at t_end).
  int output_cadence = 1;
  /// Compute the gradient (Fisher) term at every step. Costs one FFT per species.
  bool track_dissipation = true;
};

/// Regularization added under square roots of densities.
inline constexpr double kSqrtRegularization = 1e-14;

/// A step produced a value below -negativity_tolerance.
class NegativeStep : public Error {
 public:
  NegativeStep(std::size_t species, std::size_t index, Point where, double value);
  std::size_t species() const noexcept { return species_; }
  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t species_;
  std::size_t index_;
  double value_;
};

/// Step rejection persisted past max_rejects; carries everything computed so far.
class SimulationFailure : public Error {
 public:
  SimulationFailure(const std::string& what, Trajectory partial);
  const Trajectory& partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<const Trajectory> partial_;
};

/// One-step map for a fixed grid, network and coefficients.
class Integrator {
 public:
  Integrator(const Grid& grid, ReactionNetwork net, DiffusionCoeffs coeffs, Scheme scheme,
             double negativity_tolerance = 1e-12);

  /// Advances by dt. Throws NegativeStep when the result dips below -tolerance.
  SpeciesState step(const SpeciesState& state, double dt) const;

  /// h^2 / (2 N upper): the explicit stencil's stability bound.
  double explicit_dt_limit() const noexcept;

  const Grid& grid() const noexcept { return grid_; }
  const SpectralOps& spectral() const noexcept { return spectral_; }
  const ReactionNetwork& network() const noexcept { return net_; }
  const DiffusionCoeffs& coeffs() const noexcept { return coeffs_; }
  Scheme scheme() const noexcept { return scheme_; }

 private:
  Grid grid_;
  ReactionNetwork net_;
  DiffusionCoeffs coeffs_;
  Scheme scheme_;
  double tolerance_;
  SpectralOps spectral_;
};

SpeciesState step(const SpeciesState& state, const ReactionNetwork& net, const DiffusionCoeffs& coeffs, double dt,
                  Scheme scheme = Scheme::imex_spectral);

/// Integrates to cfg.t_end with nominal steps of (about) dt_init. A rejected
/// step is retried as 2, 4, ... substeps; frames stay on the nominal cadence.
Trajectory simulate(const SpeciesState& init, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                    const SimConfig& cfg);

/// sum_i int a_i ln a_i with 0 ln 0 = 0.
double entropy(const SpeciesState& state);
/// sum_i int |grad sqrt(a_i + eps_reg)|^2 with spectral derivatives.
double fisher_information(const SpeciesState& state, const SpectralOps& ops);
double fisher_information(const SpeciesState& state);
/// sum_i int a_i (1 + |x| + |ln a_i|), |x| measured from the box center.
double moment_entropy_functional(const SpeciesState& state);
/// Fraction of total mass in the outer shell max_d |x_d| > 0.375 L.
double boundary_mass_fraction(const SpeciesState& state);

/// Recomputes StepRecord::entropy_residual for a log read back from disk:
/// (E_k - E_{k-1}) / dt_k + 4 lower (D_k + D_{k-1}) / 2. Entry 0 is 0.
std::vector<double> entropy_residuals(const std::vector<StepRecord>& log, double lower);

/// Second-order centered Laplacian on the periodic lattice.
Field laplacian_fd(const Field& f);

/// d_t a_i - d_i Lap_h a_i - Q_i(a) at the frame nearest t, using centered
/// differences between the neighbouring frames.
std::vector<Field> pde_residual(const Trajectory& traj, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                                double t);

struct RescaleOptions {
  int points = 0;           ///< 0 keeps the source n
  double box_length = 0.0;  ///< 0 uses L / eps, so lattice points map onto lattice points
};

/// a^(eps)(s, y) = eps^{2/(q-1)} a(t + eps^2 s, x + eps y) for s in [-4, 0],
/// sampled from the source frames in [t - 4 eps^2, t] with multilinear
/// periodic interpolation in space.
Trajectory rescale(const Trajectory& traj, const Point& center, double center_t, double eps, double q,
                   const RescaleOptions& options = {});

/// Periodic multilinear interpolation of a lattice field at x.
double interpolate(const Field& f, const Point& x);

/// Directory layout: frame_NNNNNN.erds per frame plus diagnostics.csv.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj);
Trajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace erds
