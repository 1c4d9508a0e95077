#pragma once

#include <optional>

#include <cstdint>
#include <vector>

#include "erds/csv.hpp"
#include "erds/dynamics.hpp"
#include "erds/trajectory.hpp"

namespace erds {

/// M = sum_i a_i, pointwise.
Field total_mass(const SpeciesState& state);
FieldSeries mass_series(const Trajectory& traj);

/// d = sum d_i a_i / sum a_i where M >= mu, blended by a smooth ramp over
/// [mu/2, mu] to (lower + upper) / 2 below. Always inside [lower, upper].
Field effective_diffusion(const SpeciesState& state, const DiffusionCoeffs& coeffs, double mu);

enum class PoissonBackend { periodic_spectral, free_space_kernel };

struct PotentialField {
  Field phi;
  PoissonBackend backend;
  /// Mean of the source removed by the periodic backend (0 for free space).
  double mean_note = 0.0;
};

/// Solves Laplacian(phi) = M.
///   periodic_spectral: Laplacian(phi) = M - mean(M) on the torus, zero-mean phi.
///   free_space_kernel: phi = -C_N int M(y) |x-y|^{2-N} dy with M extended by
///     zero outside the box (2x zero padding); requires N = 3. Lattice
///     quadrature with the corrected-trapezoid origin weight.
PotentialField poisson_potential(const Field& mass, PoissonBackend backend);

/// Periodic potential with the removed mean restored as a neutralizing
/// background term: phi_per + mean(M) |x - c|^2 / (2N), c the center of mass.
/// Up to a constant this approximates the free-space potential of a source
/// concentrated well inside the box.
Field mean_corrected_periodic_potential(const Field& mass);

struct BackendComparison {
  double max_relative_difference = 0.0;  ///< over the support, constant matched by the support mean
  double gauge_shift = 0.0;              ///< that constant: mean of phi_free - phi_per over the support
  /// Same difference with the constant matched at the reference point (0 without one).
  double reference_relative_difference = 0.0;
  std::size_t support_points = 0;
};

/// Compares the free-space and mean-corrected periodic potentials on the
/// points where M > 0 and M >= support_fraction * max M, relative to
/// max |phi_free|. Potentials are defined up to a constant; it is fixed
/// either by the mean difference over the support or at `reference`.
BackendComparison compare_poisson_backends(const Field& mass, double support_fraction = 1e-2,
                                           std::optional<Point> reference = std::nullopt);

/// C_N = 1 / ((N - 2) sigma_N).
double riesz_constant(int dim);

/// Minimum over R > 0 of C_N sigma_N R^2 / 2 * sup + C_N R^{2-N} * mass,
/// found numerically (golden section in log R).
double split_radius_bound(int dim, double sup_norm, double l1_norm);
/// The dimensional constant: split_radius_bound(dim, 1, 1).
double potential_constant(int dim);

struct PotentialBound {
  double lhs = 0.0;  ///< ||phi||_inf from the free-space backend
  double rhs = 0.0;  ///< K_N ||M0||_inf^{1-2/N} ||M0||_1^{2/N}
  double constant = 0.0;
};

PotentialBound potential_linfty_bound(const Field& m0);

struct HolderEstimate {
  double alpha = 1.0;
  double constant = 0.0;
  int sample_count = 0;
  std::vector<double> alphas;     ///< candidate exponents (0 first)
  std::vector<double> constants;  ///< C(alpha) normalized by ||phi||_inf
};

struct HolderOptions {
  int pair_budget = 4000;
  std::uint64_t seed = 1;
  /// Largest spatial displacement per axis as a fraction of L.
  double max_shift_fraction = 0.25;
  int alpha_steps = 20;
};

/// Sweeps alpha in (0, 1] and reports the largest alpha whose normalized
/// quotient constant stays within 10x the alpha = 0 value.
HolderEstimate holder_quotient(const FieldSeries& phi, double t0, const HolderOptions& options = {});
CsvTable holder_table(const HolderEstimate& est);

/// Periodic potentials Phi(t) = Laplacian^{-1} M(t) for every frame.
FieldSeries potential_series(const Trajectory& traj);

struct WeakNormRow {
  double eps = 0.0;
  double sup_mass = 0.0;  ///< sup_{s in (-4,0)} int_{B_2} M^(eps)(s, y) dy
};

struct WeakNormScan {
  std::vector<WeakNormRow> rows;
  double slope = 0.0;  ///< log-log regression slope of sup_mass against eps
};

/// Spacing of the fixed lattice in the zoomed variable y used to integrate
/// over B_2; it does not depend on eps, so lattice effects cancel in the slope.
inline constexpr double kWeakNormSpacing = 0.125;

/// sup over frames in [center_t - 4 eps^2, center_t] of int_{B_2} M^(eps)(s, y) dy,
/// with M^(eps)(s, y) = eps^{2/(q-1)} M(center_t + eps^2 s, center + eps y)
/// interpolated multilinearly from the source lattice.
WeakNormScan weak_norm_scan(const Trajectory& traj, const Point& center, double center_t,
                            const std::vector<double>& eps_list, double q);
CsvTable weak_norm_table(const WeakNormScan& scan);

/// alpha - 2 + 2/(q - 1)
double weak_norm_exponent(double alpha, double q);
/// The q at which weak_norm_exponent vanishes: 2 + alpha / (2 - alpha).
double critical_growth_exponent(double alpha);

/// Least-squares slope of log y against log x (entries with y <= 0 skipped).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace erds
