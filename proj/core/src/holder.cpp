#include <algorithm>
#include <cmath>
#include <random>

#include "erds/mass_analysis.hpp"

namespace erds {

namespace {

struct PairSample {
  double diff;
  double tau;
  double dist;
};

}  // namespace

HolderEstimate holder_quotient(const FieldSeries& phi, double t0, const HolderOptions& options) {
  if (options.pair_budget <= 0 || options.alpha_steps <= 0)
    throw DomainError("holder_quotient: pair budget and alpha steps must be positive");
  if (!(options.max_shift_fraction > 0.0 && options.max_shift_fraction <= 0.5))
    throw DomainError("holder_quotient: max_shift_fraction must lie in (0, 1/2]");
  std::vector<const TimedField*> frames;
  for (const auto& f : phi)
    if (f.time >= t0 - 1e-9 * std::max(1.0, std::abs(t0))) frames.push_back(&f);
  if (frames.size() < 2) {
    const double last = phi.empty() ? t0 : phi.back().time;
    throw CoverageError(t0, std::max(t0, last), "holder_quotient needs two frames at or after t0");
  }

  const Grid& g = frames.front()->field.grid();
  const int n = g.n();
  const int dim = g.dim();
  const int max_shift = std::max(1, static_cast<int>(options.max_shift_fraction * n));
  double norm = 0.0;
  for (const auto* f : frames) norm = std::max(norm, lp_norm(f->field, Region::all(), kInfinity));

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick_frame(0, frames.size() - 1);
  std::uniform_int_distribution<int> pick_cell(0, n - 1);
  std::uniform_int_distribution<int> pick_shift(-max_shift, max_shift);
  std::uniform_int_distribution<int> pick_small(1, 3);
  std::uniform_int_distribution<int> pick_axis(0, dim - 1);
  std::bernoulli_distribution coin(0.5);

  // Displacements never wrap around the torus, so |x - y| is the Euclidean distance.
  std::vector<PairSample> samples;
  samples.reserve(static_cast<std::size_t>(options.pair_budget));
  int attempts = 0;
  while (static_cast<int>(samples.size()) < options.pair_budget && attempts < 50 * options.pair_budget) {
    ++attempts;
    std::size_t fa = pick_frame(rng), fb = pick_frame(rng);
    if (fa > fb) std::swap(fa, fb);
    Index3 x{0, 0, 0}, y{0, 0, 0};
    Index3 shift{0, 0, 0};
    if (coin(rng)) {
      shift[static_cast<std::size_t>(pick_axis(rng))] = coin(rng) ? pick_small(rng) : -pick_small(rng);
    } else {
      for (int a = 0; a < dim; ++a) shift[static_cast<std::size_t>(a)] = pick_shift(rng);
    }
    bool inside = true;
    double dist2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const auto s = static_cast<std::size_t>(a);
      x[s] = pick_cell(rng);
      y[s] = x[s] + shift[s];
      if (y[s] < 0 || y[s] >= n) inside = false;
      dist2 += (shift[s] * g.spacing()) * (shift[s] * g.spacing());
    }
    if (!inside) continue;
    const double tau = frames[fb]->time - frames[fa]->time;
    if (tau == 0.0 && dist2 == 0.0) continue;
    const double diff = std::abs(frames[fb]->field[g.flatten(y)] - frames[fa]->field[g.flatten(x)]);
    samples.push_back({diff, tau, std::sqrt(dist2)});
  }

  HolderEstimate est;
  est.sample_count = static_cast<int>(samples.size());
  est.alphas.push_back(0.0);
  for (int k = 1; k <= options.alpha_steps; ++k) est.alphas.push_back(static_cast<double>(k) / options.alpha_steps);
  for (double alpha : est.alphas) {
    double worst = 0.0;
    for (const auto& s : samples) {
      const double denom = alpha == 0.0 ? 2.0 : std::pow(s.tau, alpha / 2.0) + std::pow(s.dist, alpha);
      worst = std::max(worst, s.diff / denom);
    }
    est.constants.push_back(norm > 0.0 ? worst / norm : 0.0);
  }
  const double cap = 10.0 * est.constants.front();
  est.alpha = 0.0;
  est.constant = est.constants.front();
  for (std::size_t k = 0; k < est.alphas.size(); ++k)
    if (est.constants[k] <= cap) {
      est.alpha = est.alphas[k];
      est.constant = est.constants[k];
    }
  return est;
}

CsvTable holder_table(const HolderEstimate& est) {
  CsvTable t;
  t.columns = {"alpha", "constant", "feasible"};
  t.units = "constant = max |dPhi| / (tau^(alpha/2) + |dx|^alpha) / ||Phi||_inf; feasible = constant <= 10 C(0)";
  for (std::size_t k = 0; k < est.alphas.size(); ++k)
    t.add_row({est.alphas[k], est.constants[k], est.constants[k] <= 10.0 * est.constants.front() ? 1.0 : 0.0});
  return t;
}

}  // namespace erds
