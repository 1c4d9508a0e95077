#pragma once

#include <optional>
#include <string>
#include <vector>

#include "erds/csv.hpp"
#include "erds/trajectory.hpp"

namespace erds {

/// H(z) = (1 + z) ln(1 + z) - z for z >= 0, 0 otherwise.
double entropy_H(double z);
/// Psi(z) = sqrt(1 + z) - 1.
double Psi(double z);

/// Truncation levels k_j = 1 - 2^{-j} and radii t_j = 1/4 + 2^{-j-2}.
struct LevelSequence {
  int j_max = 10;
  static double k(int j);
  static double t(int j);
};

struct LevelEnergyOptions {
  std::optional<double> eta;            ///< truncation level; defaults to k_j
  std::optional<std::size_t> species;   ///< one species; defaults to the sum over all
  Point center{};
  std::optional<double> anchor_t;       ///< top of the cylinder; defaults to the last frame
};

/// Frames inside the window must be at most this far apart.
inline constexpr double kMaxLevelFrameGap = 1.0 / 32.0;

/// sup_{t in [-t_j, 0]} sum_i int_{B_{t_j}} H(a_i - eta)
///   + sum_i int_{-t_j}^0 int_{B_{t_j}} |grad sqrt(1 + [a_i - eta]_+)|^2,
/// with the gradient taken as the edge (one-sided) Dirichlet energy and the
/// time integral by the trapezoid rule over frames. Throws CoverageError for
/// a short trajectory and InsufficientData for frames sparser than 1/32.
double level_set_energy(const Trajectory& traj, int j, const LevelEnergyOptions& options = {});

enum class OrbitVerdict { converged, diverged, undecided };
std::string to_string(OrbitVerdict v);

struct RecursionOrbit {
  std::vector<double> values;  ///< u_0 .. u_n (stops at the first overflow)
  double F = 0.0;              ///< gamma / (gamma - 1)^2
  double kappa = 0.0;          ///< Lambda^{-F}
  OrbitVerdict verdict = OrbitVerdict::undecided;
  int first_overflow = -1;
};

/// F(gamma) = gamma / (gamma - 1)^2.
double recursion_exponent(double gamma);

/// The equality orbit u_n = Lambda^n u_{n-1}^gamma, iterated in log space.
/// Converged once u underflows double precision; diverged at the first overflow.
RecursionOrbit recursion_simulate(double u0, double lambda, double gamma, int n);

struct LadderFit {
  bool skipped = false;      ///< all-zero ladder: nothing to fit
  double lambda = 0.0;
  double gamma = 0.0;
  double predicted_limit = 0.0;  ///< limit of the fitted orbit started at U_0
  bool converges = true;
  /// Which exponent the fit is closer to: "1+N/2" or "1+2/N".
  std::string favored_exponent;
};

/// Least squares of log U_j on (j, log U_{j-1}) without intercept.
/// Needs at least four positive entries unless the ladder is identically zero.
LadderFit ladder_fit(const std::vector<double>& ladder, int dim);

/// (N - 2) / N, the interpolation exponent paired with the L^2 gradient bound.
double interpolation_exponent(int dim);

struct EnergyLadder {
  std::vector<double> values;  ///< U_0 .. U_{j_max}
  std::optional<LadderFit> fit;
  std::string fit_note;
};

EnergyLadder energy_ladder(const Trajectory& traj, int j_max, const Point& center, double anchor_t);
CsvTable ladder_table(const EnergyLadder& ladder);

struct SmallnessReport {
  double r = 0.0;
  double lr_norm = 0.0;       ///< sum_i ||a_i||_{L^r((-1, 0) x B_1)}
  EnergyLadder ladder;
  double center_value = 0.0;  ///< max_i a_i at the cylinder top and center
  bool center_bounded = false;
  bool ladder_small = false;  ///< U_{j_max} < 1e-6
};

SmallnessReport smallness_boundedness_test(const Trajectory& traj, double r, const Point& center, double anchor_t);
SmallnessReport smallness_boundedness_test(const Trajectory& traj, double r);

/// max over log-spaced z in [z_lo, z_hi] of (1+z)^gamma ln(1+z) / Psi(z)^{2(gamma+beta)}.
/// The ratio behaves like z^{-2 gamma} as z -> 0, so z_lo must be positive.
double fit_c_beta(double gamma, double beta, double z_lo, double z_hi, int samples = 4000);

}  // namespace erds
