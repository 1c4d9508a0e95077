#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "erds/csv.hpp"
#include "erds/cylinder.hpp"
#include "erds/trajectory.hpp"

namespace erds {

using SpaceTimeFunction = std::function<double(double, const Point&)>;

/// Final-value problem  d_t u + d Lap u = f,  u(T, .) = 0,  u = 0 on the
/// boundary of B_2, solved for t in [t_min, T].
struct DualProblem {
  SpaceTimeFunction f;
  SpaceTimeFunction d;
  double lower = 0.5;
  double upper = 2.0;
  double T = 0.0;
  double t_min = -4.0;
  bool d_time_dependent = false;
  /// Zero f outside Q_1 = (-1, 0) x B_1.
  bool mask_to_unit_cylinder = true;
};

struct DualOptions {
  int n = 32;          ///< intervals per axis on [-2, 2]
  double dt = 0.0;     ///< 0: 0.9 h^2 / (2 N upper)
  int store_every = 0; ///< keep every k-th time level; 0 keeps only t = T and t = t_min
  /// Freeze nodes with |x| >= 2 at zero (the ball); false uses the full cube.
  bool ball_domain = true;
};

struct DualSolution {
  int dim = 0;
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  std::vector<double> times;                ///< descending, times.front() == T
  std::vector<std::vector<double>> frames;  ///< (n+1)^N nodes, row-major, axis 0 slowest
  double sup_abs_q2 = 0.0;                  ///< sup |u| over (-4, 0] x B_2
  double f_norm_q2 = 0.0;                   ///< ||f||_{L^{N+1}(Q_2)}

  std::size_t node_count() const;
  Point node_position(std::size_t flat) const;
};

/// Integrates v(s) = u(T - s) forward in s with the explicit monotone stencil.
/// Throws DomainError when d leaves [lower, upper] or dt breaks the stability bound.
DualSolution solve_dual_final(const DualProblem& prob, int dim, const DualOptions& options = {});

/// sup_{Q_2} |u| / ||f||_{L^{N+1}(Q_2)}. Throws UndefinedRatio when f == 0.
double abp_ratio(const DualSolution& u);

/// A random smooth d in [lower, upper] and a signed smooth bump f supported in Q_1.
DualProblem random_dual_problem(int dim, std::uint64_t seed, double lower, double upper);

struct FabesResult {
  double lhs = 0.0;         ///< ||M||_{L^{(N+1)/N}(Q_1)}
  double rhs_factor = 0.0;  ///< sup_{t in [-4, 0]} int_{B_2} M(t)
  double ratio = 0.0;       ///< lhs / rhs_factor; 0 when both vanish
};

/// Cylinders are centered at `center` with top time `anchor_t`.
FabesResult fabes_duality_check(const Trajectory& traj, const Point& center, double anchor_t);
FabesResult fabes_duality_check(const Trajectory& traj);

/// Explicit periodic solver for d_t phi = d(t, x) Lap phi on [t0, t_end]; a frame
/// every `cadence` steps plus the last one.
FieldSeries evolve_nondivergence(const Field& phi0, const SpaceTimeFunction& d, double lower, double upper, double t0,
                                 double t_end, double dt = 0.0, int cadence = 1, bool d_time_dependent = true);

/// osc(phi, Q_half) / osc(phi, Q_2); 0 when the outer oscillation vanishes.
double oscillation_decay(const FieldSeries& phi, const Cylinder& outer, const Cylinder& inner);

struct EnsembleRow {
  std::uint64_t seed = 0;
  int n = 0;
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 0.0;
};

double ensemble_max(const std::vector<EnsembleRow>& rows);
/// Nearest-rank 95th percentile of the ratios.
double ensemble_p95(const std::vector<EnsembleRow>& rows);
/// One row per member plus a max row (summary = 1) and a p95 row (summary = 2).
CsvTable ensemble_table(const std::vector<EnsembleRow>& rows, const std::string& quantity);

std::vector<EnsembleRow> abp_ensemble(int dim, int n, int members, std::uint64_t seed, double lower = 0.5,
                                      double upper = 2.0);

struct FabesEnsembleOptions {
  int dim = 3;
  int n = 16;
  double box_length = 8.0;
  double t_end = 4.0;
  double dt = 0.02;
  int output_cadence = 5;
  int members = 20;
  std::uint64_t seed = 1;
  double lower = 0.5;
  double upper = 2.0;
};

/// Four-species runs with d_i drawn uniformly from [lower, upper].
std::vector<EnsembleRow> fabes_ensemble(const FabesEnsembleOptions& options);

struct OscillationEnsembleOptions {
  int dim = 2;
  int n = 64;
  double box_length = 8.0;
  double t_end = 4.0;
  int members = 20;
  std::uint64_t seed = 1;
  double lower = 0.5;
  double upper = 2.0;
};

/// Random smooth d(t, x) and random smooth initial data; ratio measured at the final time.
std::vector<EnsembleRow> oscillation_ensemble(const OscillationEnsembleOptions& options);

}  // namespace erds
