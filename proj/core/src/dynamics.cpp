#include "erds/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace erds {

namespace {

std::string describe_point(const Point& p, int dim) {
  std::ostringstream os;
  os << "(";
  for (int d = 0; d < dim; ++d) os << (d ? ", " : "") << p[d];
  os << ")";
  return os.str();
}

}  // namespace

DiffusionCoeffs::DiffusionCoeffs(std::vector<double> coeffs, double lo, double hi)
    : d(std::move(coeffs)), lower(lo), upper(hi) {
  if (d.empty()) throw DomainError("diffusion coefficients: empty list");
  if (!(lower > 0.0) || !(upper >= lower)) throw DomainError("diffusion bounds must satisfy 0 < lower <= upper");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (!(d[i] >= lower) || !(d[i] <= upper))
      throw DomainError("d_" + std::to_string(i + 1) + " = " + std::to_string(d[i]) + " lies outside [" +
                        std::to_string(lower) + ", " + std::to_string(upper) + "]");
}

DiffusionCoeffs DiffusionCoeffs::tight(std::vector<double> d) {
  if (d.empty()) throw DomainError("diffusion coefficients: empty list");
  const auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  const double l = *lo, h = *hi;
  return DiffusionCoeffs(std::move(d), l, h);
}

bool DiffusionCoeffs::all_equal() const noexcept {
  return std::all_of(d.begin(), d.end(), [&](double v) { return v == d.front(); });
}

Scheme parse_scheme(const std::string& name) {
  if (name == "imex-spectral") return Scheme::imex_spectral;
  if (name == "explicit") return Scheme::explicit_fd;
  throw DomainError("unknown scheme '" + name + "' (expected explicit or imex-spectral)");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::imex_spectral ? "imex-spectral" : "explicit";
}

NegativeStep::NegativeStep(std::size_t species, std::size_t index, Point where, double value)
    : Error("step produced a_" + std::to_string(species + 1) + " = " + std::to_string(value) + " at lattice index " +
            std::to_string(index) + " x = " + describe_point(where, 3)),
      species_(species),
      index_(index),
      value_(value) {}

SimulationFailure::SimulationFailure(const std::string& what, Trajectory partial)
    : Error(what), partial_(std::make_shared<const Trajectory>(std::move(partial))) {}

Integrator::Integrator(const Grid& grid, ReactionNetwork net, DiffusionCoeffs coeffs, Scheme scheme,
                       double negativity_tolerance)
    : grid_(grid),
      net_(std::move(net)),
      coeffs_(std::move(coeffs)),
      scheme_(scheme),
      tolerance_(negativity_tolerance),
      spectral_(grid) {
  if (static_cast<std::size_t>(net_.species_count()) != coeffs_.size())
    throw DomainError("network species count and diffusion coefficient count differ");
}

double Integrator::explicit_dt_limit() const noexcept {
  const double h = grid_.spacing();
  return h * h / (2.0 * grid_.dim() * coeffs_.upper);
}

SpeciesState Integrator::step(const SpeciesState& state, double dt) const {
  const std::size_t p = state.species.size();
  if (static_cast<int>(p) != net_.species_count()) throw DomainError("state species count does not match network");
  if (!(state.grid() == grid_)) throw DomainError("state grid does not match integrator grid");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (scheme_ == Scheme::explicit_fd && dt > explicit_dt_limit() * (1.0 + 1e-12))
    throw DomainError("dt exceeds the explicit stability bound h^2/(2 N delta_upper)");

  SpeciesState next;
  next.time = state.time + dt;
  next.species.assign(p, Field(grid_));

  std::vector<double> a(p), q(p);
  for (std::size_t x = 0; x < grid_.size(); ++x) {
    for (std::size_t i = 0; i < p; ++i) a[i] = state.species[i][x];
    net_.rates(a, q);
    for (std::size_t i = 0; i < p; ++i) next.species[i][x] = a[i] + dt * q[i];
  }

  for (std::size_t i = 0; i < p; ++i) {
    if (scheme_ == Scheme::imex_spectral) {
      spectral_.heat_semigroup(next.species[i].values(), coeffs_.d[i] * dt);
    } else {
      const Field lap = laplacian_fd(state.species[i]);
      auto out = next.species[i].values();
      for (std::size_t x = 0; x < out.size(); ++x) out[x] += dt * coeffs_.d[i] * lap[x];
    }
  }

  for (std::size_t i = 0; i < p; ++i) {
    const auto v = next.species[i].values();
    for (std::size_t x = 0; x < v.size(); ++x) {
      if (!std::isfinite(v[x])) throw NegativeStep(i, x, grid_.position(x), v[x]);
      if (v[x] < -tolerance_) throw NegativeStep(i, x, grid_.position(x), v[x]);
    }
  }
  return next;
}

SpeciesState step(const SpeciesState& state, const ReactionNetwork& net, const DiffusionCoeffs& coeffs, double dt,
                  Scheme scheme) {
  return Integrator(state.grid(), net, coeffs, scheme).step(state, dt);
}

double entropy(const SpeciesState& state) {
  double s = 0.0;
  for (const auto& f : state.species)
    for (double v : f.values())
      if (v > 0.0) s += v * std::log(v);
  return state.grid().cell_volume() * s;
}

double fisher_information(const SpeciesState& state, const SpectralOps& ops) {
  const Grid& g = state.grid();
  const RealFft& fft = ops.fft();
  const auto k2 = ops.wavenumber_sq();
  const int n = g.n();
  const int half = n / 2 + 1;
  const double k0 = 2.0 * std::numbers::pi / g.length();
  std::vector<double> root(g.size());
  std::vector<std::complex<double>> spec(fft.spectral_size());
  double total = 0.0;
  for (const auto& f : state.species) {
    const auto v = f.values();
    for (std::size_t x = 0; x < root.size(); ++x) root[x] = std::sqrt(std::max(v[x], 0.0) + kSqrtRegularization);
    fft.forward(root, spec);
    // Parseval on the half spectrum; modes on the Nyquist plane of an axis
    // carry no derivative along that axis.
    double acc = 0.0;
    for (std::size_t s = 0; s < spec.size(); ++s) {
      if (k2[s] == 0.0) continue;
      std::size_t rest = s;
      const int last = static_cast<int>(rest % static_cast<std::size_t>(half));
      rest /= static_cast<std::size_t>(half);
      double kk = 0.0;
      std::array<int, 3> idx{0, 0, 0};
      idx[g.dim() - 1] = last;
      for (int d = g.dim() - 2; d >= 0; --d) {
        idx[d] = static_cast<int>(rest % static_cast<std::size_t>(n));
        rest /= static_cast<std::size_t>(n);
      }
      for (int d = 0; d < g.dim(); ++d) {
        if (idx[d] == n / 2) continue;
        const int m = idx[d] < n / 2 ? idx[d] : idx[d] - n;
        kk += (k0 * m) * (k0 * m);
      }
      const double weight = (last == 0 || last == n / 2) ? 1.0 : 2.0;
      acc += weight * kk * std::norm(spec[s]);
    }
    // sum_x |grad u|^2 = (1 / n^N) sum_k |k|^2 |u_k|^2
    total += acc / static_cast<double>(g.size());
  }
  return g.cell_volume() * total;
}

double fisher_information(const SpeciesState& state) { return fisher_information(state, SpectralOps(state.grid())); }

double moment_entropy_functional(const SpeciesState& state) {
  const Grid& g = state.grid();
  double s = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Point p = g.position(x);
    double r2 = 0.0;
    for (int d = 0; d < g.dim(); ++d) r2 += p[d] * p[d];
    const double r = std::sqrt(r2);
    for (const auto& f : state.species) {
      const double v = f[x];
      if (v > 0.0) s += v * (1.0 + r + std::abs(std::log(v)));
    }
  }
  return g.cell_volume() * s;
}

double boundary_mass_fraction(const SpeciesState& state) {
  const Grid& g = state.grid();
  const double cut = 0.375 * g.length();
  double outer = 0.0, total = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Point p = g.position(x);
    bool shell = false;
    for (int d = 0; d < g.dim(); ++d) shell = shell || std::abs(p[d]) > cut;
    for (const auto& f : state.species) {
      const double v = std::max(f[x], 0.0);
      total += v;
      if (shell) outer += v;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

std::vector<double> entropy_residuals(const std::vector<StepRecord>& log, double lower) {
  std::vector<double> out(log.size(), 0.0);
  for (std::size_t k = 1; k < log.size(); ++k)
    if (log[k].dt > 0.0)
      out[k] = (log[k].entropy - log[k - 1].entropy) / log[k].dt +
               4.0 * lower * 0.5 * (log[k].dissipation + log[k - 1].dissipation);
  return out;
}

Field laplacian_fd(const Field& f) {
  const Grid& g = f.grid();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  Field out(g);
  for (std::size_t x = 0; x < g.size(); ++x) {
    const Index3 idx = g.unflatten(x);
    double acc = -2.0 * g.dim() * f[x];
    for (int d = 0; d < g.dim(); ++d) {
      Index3 up = idx, dn = idx;
      up[d] += 1;
      dn[d] -= 1;
      acc += f[g.wrapped(up)] + f[g.wrapped(dn)];
    }
    out[x] = acc * inv_h2;
  }
  return out;
}

namespace {

StepRecord diagnose(const SpeciesState& s, const Integrator& integ, bool with_dissipation) {
  StepRecord rec;
  rec.time = s.time;
  for (const auto& f : s.species) rec.mass.push_back(f.integral());
  rec.entropy = entropy(s);
  rec.dissipation = with_dissipation ? fisher_information(s, integ.spectral()) : 0.0;
  rec.min_value = s.min_value();
  return rec;
}

}  // namespace

Trajectory simulate(const SpeciesState& init, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                    const SimConfig& cfg) {
  init.validate(cfg.negativity_tolerance);
  if (auto issues = net.structural_issues(); !issues.empty())
    throw DomainError("network fails the structural hypotheses: " + issues.front());
  if (!(cfg.dt_init > 0.0)) throw DomainError("dt_init must be positive");
  if (!(cfg.t_end > init.time)) throw DomainError("t_end must exceed the initial time");
  if (cfg.output_cadence < 1) throw DomainError("output_cadence must be >= 1");
  if (cfg.max_rejects < 0) throw DomainError("max_rejects must be >= 0");

  Integrator integ(init.grid(), net, coeffs, cfg.scheme, cfg.negativity_tolerance);
  if (cfg.scheme == Scheme::explicit_fd && cfg.dt_init > integ.explicit_dt_limit() * (1.0 + 1e-12))
    throw DomainError("dt_init exceeds the explicit stability bound h^2/(2 N delta_upper) = " +
                      std::to_string(integ.explicit_dt_limit()));

  const double span = cfg.t_end - init.time;
  const auto steps = static_cast<long>(std::ceil(span / cfg.dt_init - 1e-9));

  Trajectory traj;
  traj.push(init);
  StepRecord prev = diagnose(init, integ, cfg.track_dissipation);
  traj.log_step(prev);

  SpeciesState current = init;
  for (long k = 1; k <= steps; ++k) {
    const double t_target = init.time + span * static_cast<double>(k) / static_cast<double>(steps);
    int rejects = 0;
    for (;;) {
      const long sub = 1L << rejects;
      const double dt = (t_target - current.time) / static_cast<double>(sub);
      try {
        SpeciesState trial = current;
        std::vector<StepRecord> records;
        StepRecord before = prev;
        for (long j = 0; j < sub; ++j) {
          trial = integ.step(trial, dt);
          if (j + 1 == sub) trial.time = t_target;
          StepRecord rec = diagnose(trial, integ, cfg.track_dissipation);
          rec.dt = dt;
          rec.rejected = j == 0 ? rejects : 0;
          rec.entropy_residual = (rec.entropy - before.entropy) / dt +
                                 4.0 * coeffs.lower * 0.5 * (rec.dissipation + before.dissipation);
          before = rec;
          records.push_back(std::move(rec));
        }
        for (auto& r : records) traj.log_step(std::move(r));
        prev = before;
        current = std::move(trial);
        break;
      } catch (const NegativeStep& neg) {
        if (++rejects > cfg.max_rejects) {
          if (traj.states().back().time < current.time) traj.push(current);
          throw SimulationFailure("step rejected " + std::to_string(cfg.max_rejects) + " times near t = " +
                                      std::to_string(current.time) + ": " + neg.what(),
                                  std::move(traj));
        }
      }
    }
    if (k % cfg.output_cadence == 0 || k == steps) traj.push(current);
  }
  return traj;
}

}  // namespace erds
