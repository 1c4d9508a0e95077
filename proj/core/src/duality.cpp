#include "erds/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "erds/dynamics.hpp"
#include "erds/errors.hpp"
#include "erds/kinetics.hpp"
#include "erds/mass_analysis.hpp"
#include "erds/random_fields.hpp"

namespace erds {

namespace {

constexpr double kDualRadius = 2.0;

double norm_of(const Point& x, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
  return std::sqrt(s);
}

// C-infinity bump on [-1, 1].
double bump(double r) { return std::abs(r) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }

}  // namespace

std::size_t DualSolution::node_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n + 1);
  return c;
}

Point DualSolution::node_position(std::size_t flat) const {
  Point p{};
  for (int a = dim - 1; a >= 0; --a) {
    const auto i = static_cast<int>(flat % static_cast<std::size_t>(n + 1));
    flat /= static_cast<std::size_t>(n + 1);
    p[static_cast<std::size_t>(a)] = -kDualRadius + i * h;
  }
  return p;
}

DualSolution solve_dual_final(const DualProblem& prob, int dim, const DualOptions& options) {
  if (dim < 1 || dim > 3) throw UnsupportedDimension("solve_dual_final supports N = 1, 2, 3");
  if (options.n < 4) throw DomainError("solve_dual_final: need n >= 4");
  if (!(prob.lower > 0.0 && prob.lower <= prob.upper)) throw DomainError("solve_dual_final: need 0 < lower <= upper");
  if (!(prob.t_min < prob.T)) throw DomainError("solve_dual_final: need t_min < T");

  DualSolution sol;
  sol.dim = dim;
  sol.n = options.n;
  sol.h = 2.0 * kDualRadius / options.n;
  const double h = sol.h;
  const double limit = h * h / (2.0 * dim * prob.upper);
  double dt = options.dt > 0.0 ? options.dt : 0.9 * limit;
  if (dt > limit * (1.0 + 1e-12))
    throw DomainError("solve_dual_final: dt exceeds the explicit bound h^2 / (2 N upper)");
  const double span = prob.T - prob.t_min;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
  dt = span / static_cast<double>(steps);
  sol.dt = dt;

  const std::size_t nodes = sol.node_count();
  const std::size_t m = static_cast<std::size_t>(options.n + 1);
  std::vector<Point> pos(nodes);
  std::vector<char> active(nodes, 0);
  std::vector<std::size_t> stride(static_cast<std::size_t>(dim));
  {
    std::size_t s = 1;
    for (int a = dim - 1; a >= 0; --a) {
      stride[static_cast<std::size_t>(a)] = s;
      s *= m;
    }
  }
  for (std::size_t x = 0; x < nodes; ++x) {
    pos[x] = sol.node_position(x);
    bool interior = true;
    std::size_t rest = x;
    for (int a = dim - 1; a >= 0; --a) {
      const std::size_t i = rest % m;
      rest /= m;
      if (i == 0 || i == m - 1) interior = false;
    }
    if (options.ball_domain && norm_of(pos[x], dim) >= kDualRadius - 1e-12) interior = false;
    active[x] = interior ? 1 : 0;
  }

  std::vector<double> dval(nodes, 0.0);
  auto sample_d = [&](double t) {
    for (std::size_t x = 0; x < nodes; ++x) {
      if (!active[x]) continue;
      const double v = prob.d(t, pos[x]);
      if (!(v >= prob.lower && v <= prob.upper))
        throw DomainError("solve_dual_final: d(t, x) = " + std::to_string(v) + " leaves [lower, upper]");
      dval[x] = v;
    }
  };
  auto f_at = [&](double t, std::size_t x) {
    if (prob.mask_to_unit_cylinder && (t <= -1.0 || t > 0.0 || norm_of(pos[x], dim) >= 1.0)) return 0.0;
    return prob.f(t, pos[x]);
  };
  const double cell = std::pow(h, dim);
  const double q2_radius = kDualRadius;
  auto in_q2_time = [&](double t) { return t <= 1e-12 && t >= -4.0 - 1e-12; };
  auto record_sup = [&](double t, const std::vector<double>& v) {
    if (!in_q2_time(t)) return;
    for (std::size_t x = 0; x < nodes; ++x)
      if (norm_of(pos[x], dim) <= q2_radius) sol.sup_abs_q2 = std::max(sol.sup_abs_q2, std::abs(v[x]));
  };

  std::vector<double> v(nodes, 0.0), next(nodes, 0.0);
  sol.times.push_back(prob.T);
  sol.frames.push_back(v);
  record_sup(prob.T, v);
  if (!prob.d_time_dependent) sample_d(prob.T);
  const double inv_h2 = 1.0 / (h * h);
  double f_power_sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = prob.T - static_cast<double>(k) * dt;
    if (prob.d_time_dependent) sample_d(t);
    for (std::size_t x = 0; x < nodes; ++x) {
      if (!active[x]) {
        next[x] = 0.0;
        continue;
      }
      double lap = -2.0 * dim * v[x];
      for (int a = 0; a < dim; ++a) {
        const std::size_t s = stride[static_cast<std::size_t>(a)];
        lap += v[x + s] + v[x - s];
      }
      const double fx = f_at(t, x);
      if (fx != 0.0 && in_q2_time(t)) f_power_sum += std::pow(std::abs(fx), dim + 1);
      next[x] = v[x] + dt * (dval[x] * lap * inv_h2 - fx);
    }
    v.swap(next);
    const double t_new = prob.T - static_cast<double>(k + 1) * dt;
    record_sup(t_new, v);
    const bool last = k + 1 == steps;
    if (last || (options.store_every > 0 && (k + 1) % static_cast<std::size_t>(options.store_every) == 0)) {
      sol.times.push_back(t_new);
      sol.frames.push_back(v);
    }
  }
  sol.f_norm_q2 = std::pow(f_power_sum * dt * cell, 1.0 / (dim + 1));
  return sol;
}

double abp_ratio(const DualSolution& u) {
  if (u.f_norm_q2 == 0.0) throw UndefinedRatio("abp_ratio: f vanishes identically on Q_2");
  return u.sup_abs_q2 / u.f_norm_q2;
}

DualProblem random_dual_problem(int dim, std::uint64_t seed, double lower, double upper) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.5, 0.75);
  std::uniform_real_distribution<double> amp(0.5, 2.0);
  std::uniform_real_distribution<double> tcenter(-0.7, -0.3);
  std::uniform_real_distribution<double> twidth(0.15, 0.3);
  Point c{};
  for (int a = 0; a < dim; ++a) c[static_cast<std::size_t>(a)] = 0.2 * unit(rng) / std::sqrt(dim);
  const double rho = radius(rng);
  const double sign = unit(rng) < 0.0 ? -1.0 : 1.0;
  const double a0 = sign * amp(rng);
  const double tc = tcenter(rng), tw = twidth(rng);

  DualProblem prob;
  prob.lower = lower;
  prob.upper = upper;
  prob.d = RandomSmoothFunction(dim, seed ^ 0x9e3779b97f4a7c15ULL, lower, upper);
  prob.f = [=](double t, const Point& x) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double dx = x[static_cast<std::size_t>(a)] - c[static_cast<std::size_t>(a)];
      r2 += dx * dx;
    }
    return a0 * bump(std::sqrt(r2) / rho) * bump((t - tc) / tw);
  };
  return prob;
}

FabesResult fabes_duality_check(const Trajectory& traj, const Point& center, double anchor_t) {
  const FieldSeries m = mass_series(traj);
  const int dim = traj.grid().dim();
  require_coverage(m, anchor_t - 4.0, anchor_t, "fabes_duality_check needs the window [t - 4, t]");
  FabesResult r;
  r.lhs = cylinder_lp_norm(m, Cylinder{1.0, center, anchor_t}, (dim + 1.0) / dim);
  const Region b2 = Region::ball(center, 2.0);
  auto consider = [&](const Field& f) { r.rhs_factor = std::max(r.rhs_factor, region_integral(f, b2)); };
  consider(field_at(m, anchor_t - 4.0));
  consider(field_at(m, anchor_t));
  for (const auto& f : m)
    if (f.time > anchor_t - 4.0 && f.time < anchor_t) consider(f.field);
  if (r.rhs_factor == 0.0) {
    if (r.lhs > 0.0) throw Error("fabes_duality_check: zero B_2 mass with positive L^p norm (norm inconsistency)");
    return r;
  }
  r.ratio = r.lhs / r.rhs_factor;
  return r;
}

FabesResult fabes_duality_check(const Trajectory& traj) { return fabes_duality_check(traj, Point{}, traj.t_end()); }

FieldSeries evolve_nondivergence(const Field& phi0, const SpaceTimeFunction& d, double lower, double upper, double t0,
                                 double t_end, double dt, int cadence, bool d_time_dependent) {
  if (!(t_end > t0)) throw DomainError("evolve_nondivergence: need t_end > t0");
  if (cadence < 1) throw DomainError("evolve_nondivergence: cadence must be positive");
  const Grid& g = phi0.grid();
  const double h = g.spacing();
  const double limit = h * h / (2.0 * g.dim() * upper);
  if (dt <= 0.0) dt = 0.9 * limit;
  if (dt > limit * (1.0 + 1e-12)) throw DomainError("evolve_nondivergence: dt exceeds the explicit bound");
  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / dt - 1e-9));
  dt = (t_end - t0) / static_cast<double>(steps);

  Field dval(g);
  auto sample = [&](double t) {
    for (std::size_t x = 0; x < dval.size(); ++x) {
      const double v = d(t, g.position(x));
      if (!(v >= lower && v <= upper)) throw DomainError("evolve_nondivergence: d leaves [lower, upper]");
      dval[x] = v;
    }
  };
  sample(t0);
  FieldSeries out{{t0, phi0}};
  Field phi = phi0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (d_time_dependent && k > 0) sample(t);
    const Field lap = laplacian_fd(phi);
    for (std::size_t x = 0; x < phi.size(); ++x) phi[x] += dt * dval[x] * lap[x];
    if ((k + 1) % static_cast<std::size_t>(cadence) == 0 || k + 1 == steps)
      out.push_back({k + 1 == steps ? t_end : t + dt, phi});
  }
  return out;
}

double oscillation_decay(const FieldSeries& phi, const Cylinder& outer, const Cylinder& inner) {
  const double big = sup_oscillation(phi, outer);
  if (big == 0.0) return 0.0;
  return sup_oscillation(phi, inner) / big;
}

double ensemble_max(const std::vector<EnsembleRow>& rows) {
  if (rows.empty()) throw InsufficientData("ensemble_max: empty ensemble");
  double m = rows.front().ratio;
  for (const auto& r : rows) m = std::max(m, r.ratio);
  return m;
}

double ensemble_p95(const std::vector<EnsembleRow>& rows) {
  if (rows.empty()) throw InsufficientData("ensemble_p95: empty ensemble");
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.ratio);
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
  return v[std::max<std::size_t>(rank, 1) - 1];
}

CsvTable ensemble_table(const std::vector<EnsembleRow>& rows, const std::string& quantity) {
  CsvTable t;
  t.columns = {"seed", "grid", "delta_lower", "delta_upper", "ratio", "summary"};
  t.units = "ratio = " + quantity + "; summary 0 = member, 1 = ensemble max, 2 = ensemble p95";
  for (const auto& r : rows)
    t.add_row({static_cast<double>(r.seed), static_cast<double>(r.n), r.lower, r.upper, r.ratio, 0.0});
  if (!rows.empty()) {
    const auto& f = rows.front();
    t.add_row({0.0, static_cast<double>(f.n), f.lower, f.upper, ensemble_max(rows), 1.0});
    t.add_row({0.0, static_cast<double>(f.n), f.lower, f.upper, ensemble_p95(rows), 2.0});
  }
  return t;
}

std::vector<EnsembleRow> abp_ensemble(int dim, int n, int members, std::uint64_t seed, double lower, double upper) {
  std::vector<EnsembleRow> rows;
  DualOptions opt;
  opt.n = n;
  for (int k = 0; k < members; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    const DualSolution u = solve_dual_final(random_dual_problem(dim, s, lower, upper), dim, opt);
    rows.push_back({s, n, lower, upper, abp_ratio(u)});
  }
  return rows;
}

std::vector<EnsembleRow> fabes_ensemble(const FabesEnsembleOptions& o) {
  std::vector<EnsembleRow> rows;
  const Grid grid(o.dim, o.n, o.box_length);
  const ReactionNetwork net = ReactionNetwork::four_species();
  for (int k = 0; k < o.members; ++k) {
    const std::uint64_t s = o.seed + static_cast<std::uint64_t>(k);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> pick(o.lower, o.upper);
    std::vector<double> d(static_cast<std::size_t>(net.species_count()));
    for (auto& di : d) di = pick(rng);
    const DiffusionCoeffs coeffs(d, o.lower, o.upper);
    SpeciesState init = random_bump_state(grid, static_cast<std::size_t>(net.species_count()), s * 7919 + 1, 0.1, 1.0, 1.2, 2);
    SimConfig cfg;
    cfg.dt_init = o.dt;
    cfg.t_end = o.t_end;
    cfg.output_cadence = o.output_cadence;
    cfg.track_dissipation = false;
    const Trajectory traj = simulate(init, net, coeffs, cfg);
    rows.push_back({s, o.n, o.lower, o.upper, fabes_duality_check(traj).ratio});
  }
  return rows;
}

std::vector<EnsembleRow> oscillation_ensemble(const OscillationEnsembleOptions& o) {
  std::vector<EnsembleRow> rows;
  const Grid grid(o.dim, o.n, o.box_length);
  const double k0 = 2.0 * std::numbers::pi / o.box_length;
  for (int k = 0; k < o.members; ++k) {
    const std::uint64_t s = o.seed + static_cast<std::uint64_t>(k);
    const RandomSmoothFunction d(o.dim, s, o.lower, o.upper, 4, 1.5, true);
    // Periodic initial data: random low modes of the box.
    std::mt19937_64 rng(s ^ 0x5bd1e995ULL);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_int_distribution<int> wave(-2, 2);
    std::vector<std::pair<Point, double>> modes;
    for (int m = 0; m < 5; ++m) {
      Point kv{};
      for (int a = 0; a < o.dim; ++a) kv[static_cast<std::size_t>(a)] = k0 * wave(rng);
      modes.emplace_back(kv, unit(rng) * 3.0);
    }
    const Field phi0 = sample_field(grid, [&](double, const Point& x) {
      double v = 0.0;
      for (const auto& [kv, phase] : modes) {
        double arg = phase;
        for (int a = 0; a < o.dim; ++a) arg += kv[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        v += std::cos(arg);
      }
      return v;
    });
    const FieldSeries phi = evolve_nondivergence(phi0, d, o.lower, o.upper, 0.0, o.t_end, 0.0, 8, true);
    const double lambda =
        oscillation_decay(phi, Cylinder{2.0, Point{}, o.t_end}, Cylinder{0.5, Point{}, o.t_end});
    rows.push_back({s, o.n, o.lower, o.upper, lambda});
  }
  return rows;
}

}  // namespace erds
