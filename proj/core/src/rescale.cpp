#include <algorithm>
#include <cmath>

#include "erds/dynamics.hpp"

namespace erds {

double interpolate(const Field& f, const Point& x) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  const int n = g.n();
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int d = 0; d < g.dim(); ++d) {
    const double u = x[d] / h + n / 2;
    const double fl = std::floor(u);
    base[d] = static_cast<int>(fl);
    frac[d] = u - fl;
  }
  double acc = 0.0;
  const int corners = 1 << g.dim();
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    Index3 idx{0, 0, 0};
    for (int d = 0; d < g.dim(); ++d) {
      const int bit = (c >> d) & 1;
      idx[d] = base[d] + bit;
      w *= bit ? frac[d] : 1.0 - frac[d];
    }
    if (w != 0.0) acc += w * f[g.wrapped(idx)];
  }
  return acc;
}

Trajectory rescale(const Trajectory& traj, const Point& center, double center_t, double eps, double q,
                   const RescaleOptions& options) {
  if (!(eps > 0.0)) throw DomainError("rescale: eps must be positive");
  if (!(q > 1.0)) throw DomainError("rescale: q must exceed 1");
  const double t0 = center_t - 4.0 * eps * eps;
  require_coverage(traj.species_series(0), t0, center_t, "rescale");

  const Grid& src = traj.grid();
  const int n_out = options.points > 0 ? options.points : src.n();
  const double l_out = options.box_length > 0.0 ? options.box_length : src.length() / eps;
  const Grid out_grid(src.dim(), n_out, l_out);
  const double amplitude = std::pow(eps, 2.0 / (q - 1.0));
  const double tol = 1e-9 * std::max(1.0, std::abs(center_t));

  // Source positions of the output lattice.
  std::vector<Point> sample(out_grid.size());
  for (std::size_t y = 0; y < out_grid.size(); ++y) {
    const Point py = out_grid.position(y);
    Point px{0.0, 0.0, 0.0};
    for (int d = 0; d < src.dim(); ++d) px[d] = center[d] + eps * py[d];
    sample[y] = px;
  }

  Trajectory out;
  for (const auto& state : traj.states()) {
    if (state.time < t0 - tol || state.time > center_t + tol) continue;
    SpeciesState s;
    s.time = (state.time - center_t) / (eps * eps);
    for (const auto& f : state.species) {
      Field g(out_grid);
      for (std::size_t y = 0; y < out_grid.size(); ++y) g[y] = amplitude * interpolate(f, sample[y]);
      s.species.push_back(std::move(g));
    }
    out.push(std::move(s));
  }
  return out;
}

std::vector<Field> pde_residual(const Trajectory& traj, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                                double t) {
  const auto& states = traj.states();
  if (states.size() < 3) throw CoverageError(t, t, "pde_residual needs three frames");
  std::size_t k = 0;
  double best = kInfinity;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double dist = std::abs(states[i].time - t);
    if (dist < best) {
      best = dist;
      k = i;
    }
  }
  if (k == 0 || k + 1 >= states.size())
    throw CoverageError(t, t, "pde_residual: time has no neighbouring frame on both sides");
  const auto& prev = states[k - 1];
  const auto& mid = states[k];
  const auto& next = states[k + 1];
  const double span = next.time - prev.time;
  const auto rates = reaction_rate(net, mid);
  std::vector<Field> out;
  for (std::size_t i = 0; i < mid.species.size(); ++i) {
    const Field lap = laplacian_fd(mid.species[i]);
    Field r(mid.grid());
    for (std::size_t x = 0; x < r.size(); ++x)
      r[x] = (next.species[i][x] - prev.species[i][x]) / span - coeffs.d.at(i) * lap[x] - rates[i][x];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace erds
