#include "erds/degiorgi.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "erds/errors.hpp"
#include "erds/norms.hpp"

namespace erds {

double entropy_H(double z) { return z > 0.0 ? (1.0 + z) * std::log1p(z) - z : 0.0; }

double Psi(double z) {
  if (z < -1.0) throw DomainError("Psi: z must be >= -1");
  return z / (std::sqrt(1.0 + z) + 1.0);
}

double LevelSequence::k(int j) { return 1.0 - std::ldexp(1.0, -j); }
double LevelSequence::t(int j) { return 0.25 + std::ldexp(1.0, -j - 2); }

namespace {

double tolerance(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

struct LevelTerms {
  double h_term = 0.0;
  double grad_term = 0.0;
};

LevelTerms level_terms(const Field& a, double eta, const std::vector<std::size_t>& ball) {
  const Grid& g = a.grid();
  std::vector<double> w(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) w[x] = std::sqrt(1.0 + std::max(a[x] - eta, 0.0));
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  LevelTerms out;
  for (std::size_t x : ball) {
    out.h_term += entropy_H(a[x] - eta);
    const Index3 idx = g.unflatten(x);
    double e = 0.0;
    for (int axis = 0; axis < g.dim(); ++axis) {
      Index3 up = idx, down = idx;
      up[static_cast<std::size_t>(axis)] += 1;
      down[static_cast<std::size_t>(axis)] -= 1;
      const double fwd = w[g.wrapped(up)] - w[x];
      const double bwd = w[x] - w[g.wrapped(down)];
      e += 0.5 * (fwd * fwd + bwd * bwd);
    }
    out.grad_term += e * inv_h2;
  }
  out.h_term *= g.cell_volume();
  out.grad_term *= g.cell_volume();
  return out;
}

}  // namespace

double level_set_energy(const Trajectory& traj, int j, const LevelEnergyOptions& options) {
  if (j < 0) throw DomainError("level_set_energy: j must be nonnegative");
  if (traj.empty()) throw CoverageError(0.0, 0.0, "level_set_energy: empty trajectory");
  const double eta = options.eta.value_or(LevelSequence::k(j));
  const double tj = LevelSequence::t(j);
  const double t1 = options.anchor_t.value_or(traj.t_end());
  const double t0 = t1 - tj;
  const Grid& g = traj.grid();
  const auto ball = ball_points(g, Ball{options.center, tj});

  std::vector<std::size_t> species;
  if (options.species) {
    if (*options.species >= traj.species_count()) throw DomainError("level_set_energy: species index out of range");
    species.push_back(*options.species);
  } else {
    for (std::size_t i = 0; i < traj.species_count(); ++i) species.push_back(i);
  }

  require_coverage(traj.species_series(species.front()), t0, t1, "level_set_energy");
  std::vector<double> times{t0};
  for (const auto& s : traj.states())
    if (s.time > t0 + tolerance(t0) && s.time < t1 - tolerance(t1)) times.push_back(s.time);
  times.push_back(t1);
  for (std::size_t k = 1; k < times.size(); ++k)
    if (times[k] - times[k - 1] > kMaxLevelFrameGap + 1e-9)
      throw InsufficientData("level_set_energy: frames inside the cylinder are sparser than 1/32 time units");

  std::vector<double> h_terms(times.size(), 0.0), grad_terms(times.size(), 0.0);
  for (std::size_t i : species) {
    const FieldSeries series = traj.species_series(i);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const LevelTerms terms = level_terms(field_at(series, times[k]), eta, ball);
      h_terms[k] += terms.h_term;
      grad_terms[k] += terms.grad_term;
    }
  }
  double grad_integral = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k)
    grad_integral += 0.5 * (grad_terms[k] + grad_terms[k - 1]) * (times[k] - times[k - 1]);
  return *std::max_element(h_terms.begin(), h_terms.end()) + grad_integral;
}

std::string to_string(OrbitVerdict v) {
  switch (v) {
    case OrbitVerdict::converged: return "converged";
    case OrbitVerdict::diverged: return "diverged";
    case OrbitVerdict::undecided: return "undecided";
  }
  return "undecided";
}

double recursion_exponent(double gamma) {
  if (!(gamma > 1.0)) throw DomainError("recursion_exponent: gamma must exceed 1");
  return gamma / ((gamma - 1.0) * (gamma - 1.0));
}

namespace {

// No parameter checks: also used for fitted (Lambda, gamma) pairs.
RecursionOrbit iterate_orbit(double u0, double lambda, double gamma, int n) {
  RecursionOrbit orbit;
  orbit.values.push_back(u0);
  if (u0 == 0.0) {
    orbit.values.resize(static_cast<std::size_t>(n) + 1, 0.0);
    orbit.verdict = OrbitVerdict::converged;
    return orbit;
  }
  const double log_lambda = std::log(lambda);
  const double log_max = std::log(DBL_MAX);
  constexpr double kUnderflow = -745.0;
  double v = std::log(u0);
  bool underflowed = false;
  for (int k = 1; k <= n; ++k) {
    if (underflowed) {
      orbit.values.push_back(0.0);
      continue;
    }
    v = k * log_lambda + gamma * v;
    if (v > log_max) {
      orbit.values.push_back(std::numeric_limits<double>::infinity());
      orbit.verdict = OrbitVerdict::diverged;
      orbit.first_overflow = k;
      return orbit;
    }
    if (v < kUnderflow) {
      underflowed = true;
      orbit.values.push_back(0.0);
      orbit.verdict = OrbitVerdict::converged;
      continue;
    }
    orbit.values.push_back(std::exp(v));
  }
  return orbit;
}

}  // namespace

RecursionOrbit recursion_simulate(double u0, double lambda, double gamma, int n) {
  if (!(lambda > 1.0)) throw DomainError("recursion_simulate: Lambda must exceed 1");
  if (!(gamma > 1.0)) throw DomainError("recursion_simulate: gamma must exceed 1");
  if (!(u0 >= 0.0)) throw DomainError("recursion_simulate: u0 must be nonnegative");
  if (n < 0) throw DomainError("recursion_simulate: n must be nonnegative");
  RecursionOrbit orbit = iterate_orbit(u0, lambda, gamma, n);
  orbit.F = recursion_exponent(gamma);
  orbit.kappa = std::pow(lambda, -orbit.F);
  return orbit;
}

LadderFit ladder_fit(const std::vector<double>& ladder, int dim) {
  for (double u : ladder)
    if (!(u >= 0.0)) throw DomainError("ladder_fit: ladder entries must be nonnegative");
  LadderFit fit;
  if (std::all_of(ladder.begin(), ladder.end(), [](double u) { return u == 0.0; })) {
    fit.skipped = true;
    fit.converges = true;
    return fit;
  }
  const auto positive = std::count_if(ladder.begin(), ladder.end(), [](double u) { return u > 0.0; });
  if (positive < 4) throw InsufficientData("ladder_fit: needs at least four positive entries");
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  for (std::size_t j = 1; j < ladder.size(); ++j) {
    if (!(ladder[j] > 0.0 && ladder[j - 1] > 0.0)) continue;
    const double x1 = static_cast<double>(j), x2 = std::log(ladder[j - 1]), y = std::log(ladder[j]);
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * y;
    b2 += x2 * y;
  }
  const double det = s11 * s22 - s12 * s12;
  if (std::abs(det) <= 1e-12 * std::max(1.0, s11 * s22))
    throw InsufficientData("ladder_fit: regression is singular");
  fit.lambda = std::exp((b1 * s22 - b2 * s12) / det);
  fit.gamma = (s11 * b2 - s12 * b1) / det;
  const RecursionOrbit orbit = iterate_orbit(ladder.front(), fit.lambda, fit.gamma, 400);
  fit.converges = orbit.verdict == OrbitVerdict::converged;
  fit.predicted_limit = orbit.verdict == OrbitVerdict::diverged ? std::numeric_limits<double>::infinity()
                                                                 : orbit.values.back();
  const double a = 1.0 + dim / 2.0, b = 1.0 + 2.0 / dim;
  fit.favored_exponent = std::abs(fit.gamma - a) <= std::abs(fit.gamma - b) ? "1+N/2" : "1+2/N";
  return fit;
}

double interpolation_exponent(int dim) {
  if (dim < 3) throw UnsupportedDimension("interpolation_exponent needs N >= 3");
  return (dim - 2.0) / dim;
}

EnergyLadder energy_ladder(const Trajectory& traj, int j_max, const Point& center, double anchor_t) {
  EnergyLadder ladder;
  LevelEnergyOptions opt;
  opt.center = center;
  opt.anchor_t = anchor_t;
  for (int j = 0; j <= j_max; ++j) ladder.values.push_back(level_set_energy(traj, j, opt));
  try {
    ladder.fit = ladder_fit(ladder.values, traj.grid().dim());
  } catch (const InsufficientData& e) {
    ladder.fit_note = e.what();
  }
  return ladder;
}

CsvTable ladder_table(const EnergyLadder& ladder) {
  CsvTable t;
  t.columns = {"j", "k_j", "t_j", "U_j"};
  t.units = "k_j truncation level; t_j cylinder radius and time extent; U_j level-set energy";
  for (std::size_t j = 0; j < ladder.values.size(); ++j) {
    const int jj = static_cast<int>(j);
    t.add_row({static_cast<double>(j), LevelSequence::k(jj), LevelSequence::t(jj), ladder.values[j]});
  }
  return t;
}

SmallnessReport smallness_boundedness_test(const Trajectory& traj, double r, const Point& center, double anchor_t) {
  if (!(r >= 1.0)) throw DomainError("smallness_boundedness_test: r must be >= 1");
  SmallnessReport rep;
  rep.r = r;
  const Cylinder q1{1.0, center, anchor_t};
  for (std::size_t i = 0; i < traj.species_count(); ++i) rep.lr_norm += cylinder_lp_norm(traj, q1, i, r);
  rep.ladder = energy_ladder(traj, 10, center, anchor_t);
  const Grid& g = traj.grid();
  const std::size_t c = g.flatten(g.nearest_index(center));
  for (std::size_t i = 0; i < traj.species_count(); ++i)
    rep.center_value = std::max(rep.center_value, field_at(traj.species_series(i), anchor_t)[c]);
  rep.center_bounded = rep.center_value <= 1.0;
  rep.ladder_small = rep.ladder.values.back() < 1e-6;
  return rep;
}

SmallnessReport smallness_boundedness_test(const Trajectory& traj, double r) {
  return smallness_boundedness_test(traj, r, Point{}, traj.t_end());
}

double fit_c_beta(double gamma, double beta, double z_lo, double z_hi, int samples) {
  if (!(z_lo > 0.0 && z_hi > z_lo)) throw DomainError("fit_c_beta: need 0 < z_lo < z_hi");
  if (samples < 2) throw DomainError("fit_c_beta: need at least two samples");
  double c = 0.0;
  const double l0 = std::log(z_lo), l1 = std::log(z_hi);
  for (int s = 0; s < samples; ++s) {
    const double z = std::exp(l0 + (l1 - l0) * s / (samples - 1));
    const double ratio = std::pow(1.0 + z, gamma) * std::log1p(z) / std::pow(Psi(z), 2.0 * (gamma + beta));
    c = std::max(c, ratio);
  }
  return c;
}

}  // namespace erds
