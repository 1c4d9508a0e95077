#include "erds/mass_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace erds {

Field total_mass(const SpeciesState& state) {
  Field m(state.grid());
  for (const auto& f : state.species) m += f;
  return m;
}

FieldSeries mass_series(const Trajectory& traj) {
  FieldSeries out;
  out.reserve(traj.states().size());
  for (const auto& s : traj.states()) out.push_back({s.time, total_mass(s)});
  return out;
}

Field effective_diffusion(const SpeciesState& state, const DiffusionCoeffs& coeffs, double mu) {
  if (!(mu >= 0.0)) throw DomainError("effective_diffusion: mu must be nonnegative");
  if (coeffs.size() != state.species.size()) throw DomainError("effective_diffusion: coefficient count mismatch");
  const double mid = 0.5 * (coeffs.lower + coeffs.upper);
  Field out(state.grid());
  for (std::size_t x = 0; x < out.size(); ++x) {
    double m = 0.0, dm = 0.0;
    for (std::size_t i = 0; i < state.species.size(); ++i) {
      const double a = std::max(state.species[i][x], 0.0);
      m += a;
      dm += coeffs.d[i] * a;
    }
    double w;
    if (mu == 0.0) {
      w = m > 0.0 ? 1.0 : 0.0;
    } else {
      const double s = std::clamp((m - 0.5 * mu) / (0.5 * mu), 0.0, 1.0);
      w = s * s * (3.0 - 2.0 * s);
    }
    const double weighted = m > 0.0 ? dm / m : mid;
    out[x] = std::clamp(w * weighted + (1.0 - w) * mid, coeffs.lower, coeffs.upper);
  }
  return out;
}

double weak_norm_exponent(double alpha, double q) { return alpha - 2.0 + 2.0 / (q - 1.0); }

double critical_growth_exponent(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("critical_growth_exponent: alpha must lie in (0, 1]");
  return 2.0 + alpha / (2.0 - alpha);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < std::min(x.size(), y.size()); ++k)
    if (x[k] > 0.0 && y[k] > 0.0) {
      lx.push_back(std::log(x[k]));
      ly.push_back(std::log(y[k]));
    }
  if (lx.size() < 2) throw InsufficientData("log-log regression needs two positive points");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  if (sxx == 0.0) throw InsufficientData("log-log regression needs two distinct abscissae");
  return sxy / sxx;
}

WeakNormScan weak_norm_scan(const Trajectory& traj, const Point& center, double center_t,
                            const std::vector<double>& eps_list, double q) {
  if (!(q > 1.0)) throw DomainError("weak_norm_scan: q must exceed 1");
  const int dim = traj.grid().dim();
  // Quadrature nodes of B_2 in the zoomed variable y, shared by every eps.
  std::vector<Point> nodes;
  const int r = static_cast<int>(std::lround(2.0 / kWeakNormSpacing));
  const int lo2 = dim > 1 ? -r : 0, hi2 = dim > 1 ? r : 0;
  const int lo3 = dim > 2 ? -r : 0, hi3 = dim > 2 ? r : 0;
  for (int i = -r; i <= r; ++i)
    for (int j = lo2; j <= hi2; ++j)
      for (int k = lo3; k <= hi3; ++k) {
        const Point y{i * kWeakNormSpacing, j * kWeakNormSpacing, k * kWeakNormSpacing};
        if (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] <= 4.0 + 1e-12) nodes.push_back(y);
      }
  const double weight = std::pow(kWeakNormSpacing, dim);

  WeakNormScan scan;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw DomainError("weak_norm_scan: eps must be positive");
    const double t0 = center_t - 4.0 * eps * eps;
    require_coverage(traj.species_series(0), t0, center_t, "weak_norm_scan");
    const double amplitude = std::pow(eps, 2.0 / (q - 1.0));
    const double tol = 1e-9 * std::max(1.0, std::abs(center_t));
    double sup = 0.0;
    for (const auto& state : traj.states()) {
      if (state.time < t0 - tol || state.time > center_t + tol) continue;
      const Field m = total_mass(state);
      double sum = 0.0;
      for (const auto& y : nodes) {
        Point x{0.0, 0.0, 0.0};
        for (int d = 0; d < dim; ++d) x[d] = center[d] + eps * y[d];
        sum += interpolate(m, x);
      }
      sup = std::max(sup, amplitude * weight * sum);
    }
    scan.rows.push_back({eps, sup});
  }
  std::vector<double> xs, ys;
  for (const auto& r : scan.rows) {
    xs.push_back(r.eps);
    ys.push_back(r.sup_mass);
  }
  const bool any_positive = std::any_of(ys.begin(), ys.end(), [](double v) { return v > 0.0; });
  scan.slope = any_positive && xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  return scan;
}

CsvTable weak_norm_table(const WeakNormScan& scan) {
  CsvTable t;
  t.columns = {"eps", "sup_mass_B2", "slope"};
  t.units = "eps dimensionless zoom factor; sup_mass_B2 = sup_s int_{B_2} M^(eps)(s,y) dy in mass units";
  for (const auto& r : scan.rows) t.add_row({r.eps, r.sup_mass, scan.slope});
  return t;
}

}  // namespace erds
