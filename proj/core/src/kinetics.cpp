#include "erds/kinetics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "erds/errors.hpp"

namespace erds {

namespace {

double monomial(std::span<const double> a, const std::vector<int>& powers) {
  double m = 1.0;
  for (std::size_t i = 0; i < powers.size(); ++i)
    for (int k = 0; k < powers[i]; ++k) m *= a[i];
  return m;
}

}  // namespace

int Reaction::reactant_order() const { return std::accumulate(reactants.begin(), reactants.end(), 0); }
int Reaction::product_order() const { return std::accumulate(products.begin(), products.end(), 0); }

ReactionNetwork::ReactionNetwork(int species, std::vector<Reaction> reactions, double growth_exponent,
                                 double growth_constant)
    : species_(species),
      reactions_(std::move(reactions)),
      growth_exponent_(growth_exponent),
      growth_constant_(growth_constant) {
  if (species < 1) throw DomainError("a reaction network needs at least one species");
  for (const auto& r : reactions_) {
    if (static_cast<int>(r.reactants.size()) != species || static_cast<int>(r.products.size()) != species)
      throw DomainError("stoichiometry vectors must have one entry per species");
    for (int v : r.reactants)
      if (v < 0) throw DomainError("negative stoichiometric coefficient");
    for (int v : r.products)
      if (v < 0) throw DomainError("negative stoichiometric coefficient");
    if (!(r.forward_rate > 0.0) || !(r.backward_rate > 0.0)) throw DomainError("rate constants must be positive");
  }
  if (!(growth_constant_ > 0.0)) throw DomainError("growth constant must be positive");
  if (!(growth_exponent_ >= 1.0)) throw DomainError("growth exponent must be >= 1");
}

ReactionNetwork ReactionNetwork::four_species() {
  Reaction r;
  r.reactants = {1, 0, 1, 0};
  r.products = {0, 1, 0, 1};
  r.forward_rate = 1.0;
  r.backward_rate = 1.0;
  // |grad Q_i| = |a| exactly, so the growth constant is 1.
  return ReactionNetwork(4, {r}, 2.0, 1.0);
}

void ReactionNetwork::accumulate(std::span<const double> a, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& r : reactions_) {
    const double w = r.forward_rate * monomial(a, r.reactants) - r.backward_rate * monomial(a, r.products);
    for (int i = 0; i < species_; ++i) {
      const int c = r.products[i] - r.reactants[i];
      if (c != 0) out[i] += c * w;
    }
  }
}

void ReactionNetwork::rates(std::span<const double> a, std::span<double> out) const {
  std::array<double, 16> small{};
  std::vector<double> big;
  std::span<double> clamped;
  if (a.size() <= small.size()) {
    clamped = std::span<double>(small.data(), a.size());
  } else {
    big.resize(a.size());
    clamped = big;
  }
  for (std::size_t i = 0; i < a.size(); ++i) clamped[i] = std::max(a[i], 0.0);
  accumulate(clamped, out);
}

void ReactionNetwork::rates_unclamped(std::span<const double> a, std::span<double> out) const { accumulate(a, out); }

std::vector<std::string> ReactionNetwork::structural_issues() const {
  std::vector<std::string> issues;
  for (std::size_t k = 0; k < reactions_.size(); ++k) {
    const auto& r = reactions_[k];
    const std::string tag = "reaction " + std::to_string(k + 1);
    if (!r.balanced())
      issues.push_back(tag + " is unbalanced (" + std::to_string(r.reactant_order()) + " -> " +
                       std::to_string(r.product_order()) + " molecules)");
    if (r.forward_rate != r.backward_rate) issues.push_back(tag + " has k_f != k_b");
    if (std::max(r.reactant_order(), r.product_order()) > growth_exponent_ + 1e-12)
      issues.push_back(tag + " has order above the declared growth exponent");
  }
  return issues;
}

std::vector<Field> reaction_rate(const ReactionNetwork& net, const SpeciesState& state) {
  const std::size_t p = state.species.size();
  if (static_cast<int>(p) != net.species_count()) throw DomainError("species count does not match the network");
  const Grid& g = state.grid();
  std::vector<Field> out(p, Field(g));
  std::vector<double> a(p), q(p);
  for (std::size_t x = 0; x < g.size(); ++x) {
    for (std::size_t i = 0; i < p; ++i) {
      a[i] = state.species[i][x];
      if (!std::isfinite(a[i])) throw DomainError("reaction_rate: non-finite input");
    }
    net.rates(a, q);
    for (std::size_t i = 0; i < p; ++i) out[i][x] = q[i];
  }
  return out;
}

double entropy_production(const ReactionNetwork& net, std::span<const double> a) {
  std::vector<double> q(a.size());
  net.rates(a, q);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += q[i] * std::log(a[i]);
  return s;
}

HypothesisReport check_hypotheses(const ReactionNetwork& net, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("check_hypotheses needs at least one sample");
  const auto p = static_cast<std::size_t>(net.species_count());
  HypothesisReport rep;
  rep.samples = samples;

  for (std::size_t k = 0; k < net.reactions().size(); ++k)
    if (!net.reactions()[k].balanced()) {
      rep.h3_symbolic = false;
      rep.notes.push_back("h3: reaction " + std::to_string(k + 1) + " does not conserve molecule count");
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto draw_positive = [&] {
    // Half the samples linear in [0, 3], half log-uniform in [e^-4, e^2].
    return uni(rng) < 0.5 ? 3.0 * uni(rng) + 1e-9 : std::exp(-4.0 + 6.0 * uni(rng));
  };

  std::vector<double> a(p), q(p), qu(p);
  double h2_worst = kInfinity;
  double h2_worst_raw = kInfinity;
  double h3_worst = 0.0;
  double h4_worst = -kInfinity;
  bool h2_violation = false;
  bool h4_violation = false;
  for (int s = 0; s < samples; ++s) {
    // h2: one coordinate forced nonpositive.
    for (auto& v : a) v = draw_positive();
    const std::size_t i = static_cast<std::size_t>(uni(rng) * static_cast<double>(p)) % p;
    a[i] = (s % 4 == 0) ? 0.0 : -uni(rng);
    net.rates(a, q);
    net.rates_unclamped(a, qu);
    double scale = 1.0;
    for (double v : q) scale = std::max(scale, std::abs(v));
    h2_worst = std::min(h2_worst, q[i]);
    h2_worst_raw = std::min(h2_worst_raw, qu[i]);
    if (q[i] < -kHypothesisTolerance * scale) h2_violation = true;

    // h3 and h4 on a strictly positive state.
    for (auto& v : a) v = draw_positive();
    net.rates(a, q);
    double sum = 0.0, qmax = 0.0, ent = 0.0, ent_scale = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      sum += q[j];
      qmax = std::max(qmax, std::abs(q[j]));
      ent += q[j] * std::log(a[j]);
      ent_scale += std::abs(q[j] * std::log(a[j]));
    }
    h3_worst = std::max(h3_worst, std::abs(sum) / (1.0 + qmax));
    h4_worst = std::max(h4_worst, ent);
    if (ent > kHypothesisTolerance * (1.0 + ent_scale)) h4_violation = true;
  }
  rep.h2_worst = h2_worst;
  rep.h2_worst_unclamped = h2_worst_raw;
  rep.h3_worst = h3_worst;
  rep.h4_worst = h4_worst;
  rep.h2_ok = !h2_violation;
  rep.h3_ok = rep.h3_symbolic && h3_worst <= kHypothesisTolerance;
  rep.h4_ok = !h4_violation;
  if (rep.h2_worst_unclamped < rep.h2_worst)
    rep.notes.push_back("h2: enforced through clamping negative inputs to zero");
  if (!rep.h2_ok) rep.notes.push_back("h2: Q_i < 0 found with a_i <= 0");
  if (!rep.h4_ok) rep.notes.push_back("h4: positive entropy production found");
  return rep;
}

GrowthFit estimate_growth(const ReactionNetwork& net, std::span<const double> radii, int directions,
                          std::uint64_t seed) {
  if (radii.size() < 2) throw DomainError("estimate_growth needs at least two radii");
  const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
  if (!(*rmin > 0.0) || *rmax / *rmin < 100.0 * (1.0 - 1e-12))
    throw DomainError("estimate_growth: radii must be positive and span at least two decades");

  const auto p = static_cast<std::size_t>(net.species_count());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < p; ++i) {
    std::vector<double> e(p, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  dirs.emplace_back(p, 1.0 / std::sqrt(static_cast<double>(p)));
  for (int d = 0; d < directions; ++d) {
    std::vector<double> z(p);
    double nrm = 0.0;
    for (auto& v : z) {
      v = std::abs(gauss(rng));
      nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    for (auto& v : z) v /= nrm;
    dirs.push_back(std::move(z));
  }

  GrowthFit fit;
  std::vector<double> a(p), ap(p), am(p), qp(p), qm(p);
  std::vector<double> jac(p * p);
  for (double R : radii) {
    double best = 0.0;
    for (const auto& z : dirs) {
      for (std::size_t i = 0; i < p; ++i) a[i] = R * z[i];
      const double step = 1e-5 * (1.0 + R);
      for (std::size_t j = 0; j < p; ++j) {
        ap = a;
        am = a;
        ap[j] += step;
        const bool one_sided = a[j] - step < 0.0;
        if (!one_sided) am[j] -= step;
        net.rates(ap, qp);
        net.rates(am, qm);
        const double denom = one_sided ? step : 2.0 * step;
        for (std::size_t i = 0; i < p; ++i) jac[i * p + j] = (qp[i] - qm[i]) / denom;
      }
      for (std::size_t i = 0; i < p; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < p; ++j) row += jac[i * p + j] * jac[i * p + j];
        best = std::max(best, std::sqrt(row));
      }
    }
    fit.radii.push_back(R);
    fit.max_gradient.push_back(best);
  }

  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < fit.radii.size(); ++k)
    if (fit.max_gradient[k] > 1e-300) {
      xs.push_back(std::log(fit.radii[k]));
      ys.push_back(std::log(fit.max_gradient[k]));
    }
  if (xs.size() < 2) {
    fit.degenerate = true;
    fit.exponent = 1.0;
    fit.constant = 0.0;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  fit.exponent = slope + 1.0;
  fit.constant = std::exp(my - slope * mx);
  return fit;
}

}  // namespace erds
