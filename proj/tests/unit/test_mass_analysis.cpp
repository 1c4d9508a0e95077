#include <doctest.h>

#include <cmath>
#include <numbers>

#include "erds/dynamics.hpp"
#include "erds/errors.hpp"
#include "erds/mass_analysis.hpp"
#include "erds/random_fields.hpp"
#include "support.hpp"

using namespace erds;
using std::numbers::pi;

namespace {

SpeciesState two_species(const Grid& g, double a1, double a2) {
  SpeciesState s;
  s.species.emplace_back(g, a1);
  s.species.emplace_back(g, a2);
  return s;
}

FieldSeries series_of(const Grid& g, std::vector<double> times, const std::function<double(double, const Point&)>& f) {
  FieldSeries out;
  for (double t : times) out.push_back({t, Field::from_function(g, [&](const Point& x) { return f(t, x); })});
  return out;
}

}  // namespace

TEST_SUITE("mass_analysis") {

TEST_CASE("total mass and effective diffusion examples") {
  const Grid g(2, 8, 2.0);
  const DiffusionCoeffs d({1.0, 2.0}, 0.5, 2.5);
  const SpeciesState s = two_species(g, 1.0, 3.0);
  CHECK(total_mass(s).max() == doctest::Approx(4.0));
  CHECK(total_mass(s).min() == doctest::Approx(4.0));
  CHECK(effective_diffusion(s, d, 1.0)[3] == doctest::Approx(7.0 / 4.0));
  CHECK(effective_diffusion(s, d, 0.0)[3] == doctest::Approx(7.0 / 4.0));
  // Below mu/2 the coefficient is the midpoint of the bounds.
  CHECK(effective_diffusion(two_species(g, 0.0, 0.0), d, 1.0)[0] == doctest::Approx(1.5));
  CHECK(effective_diffusion(two_species(g, 0.1, 0.1), d, 1.0)[0] == doctest::Approx(1.5));
  CHECK_THROWS_AS(effective_diffusion(s, d, -1.0), DomainError);

  const Grid g2(2, 32, 8.0);
  const SpeciesState r = random_bump_state(g2, 2, 11, 0.0, 1.0, 0.7, 3);
  for (double mu : {0.0, 1e-3, 0.5}) {
    const Field de = effective_diffusion(r, d, mu);
    CHECK(de.min() >= d.lower);
    CHECK(de.max() <= d.upper);
  }
}

TEST_CASE("the total mass obeys d_t M = Laplacian(d M)") {
  const Grid g(2, 64, 12.0);
  const auto net = ReactionNetwork::four_species();
  const DiffusionCoeffs d({0.5, 2.0, 1.0, 1.5}, 0.5, 2.0);
  SimConfig cfg;
  cfg.dt_init = 1e-3;
  cfg.t_end = 0.1;
  cfg.track_dissipation = false;
  const Trajectory traj = simulate(random_bump_state(g, 4, 4, 0.1, 1.0, 1.5, 2), net, d, cfg);
  const auto& st = traj.states();
  const std::size_t k = st.size() / 2;
  Field dt_m = total_mass(st[k + 1]);
  dt_m += -1.0 * total_mass(st[k - 1]);
  dt_m *= 1.0 / (st[k + 1].time - st[k - 1].time);
  Field flux = effective_diffusion(st[k], d, 0.0);
  const Field m = total_mass(st[k]);
  for (std::size_t x = 0; x < flux.size(); ++x) flux[x] *= m[x];
  Field residual = dt_m;
  residual += -1.0 * laplacian_fd(flux);
  CHECK(lp_norm(residual, Region::all(), 2.0) < 0.02 * lp_norm(dt_m, Region::all(), 2.0));
}

TEST_CASE("periodic Poisson solve of a sine mode") {
  const double L = 6.0;
  const Grid g(2, 32, L);
  const double k = 2 * pi / L;
  const Field m = Field::from_function(g, [&](const Point& x) { return 1.0 + std::sin(k * x[0]) * std::cos(k * x[1]); });
  const PotentialField p = poisson_potential(m, PoissonBackend::periodic_spectral);
  CHECK(p.mean_note == doctest::Approx(1.0));
  for (std::size_t x = 0; x < g.size(); x += 7) {
    const Point pos = g.position(x);
    CHECK(p.phi[x] == doctest::Approx(-std::sin(k * pos[0]) * std::cos(k * pos[1]) / (2 * k * k)).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("free-space potential of a Gaussian matches the radial closed form") {
  const double s = 0.6;
  const Grid g(3, 32, 8.0);
  const Field m = Field::from_function(
      g, [&](const Point& x) { return std::exp(-erds::testing::r2(x) / (2 * s * s)) / std::pow(2 * pi * s * s, 1.5); });
  const PotentialField p = poisson_potential(m, PoissonBackend::free_space_kernel);
  auto exact = [&](double r) {
    if (r < 1e-12) return -std::sqrt(2 / pi) / (4 * pi * s);
    return -std::erf(r / (std::sqrt(2.0) * s)) / (4 * pi * r);
  };
  const double scale = std::abs(exact(0.0));
  double worst = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x)
    worst = std::max(worst, std::abs(p.phi[x] - exact(std::sqrt(erds::testing::r2(g.position(x))))));
  CHECK(worst < 2e-3 * scale);
  CHECK(p.phi.max() <= 0.0);
  CHECK_THROWS_AS(poisson_potential(Field(Grid(2, 8, 1.0), 1.0), PoissonBackend::free_space_kernel),
                  UnsupportedDimension);
}

TEST_CASE("free-space and background-corrected periodic potentials agree up to a constant") {
  const Grid g(3, 32, 16.0);
  const Field m = Field::from_function(g, [](const Point& x) { return std::exp(-erds::testing::r2(x) / 2); });
  const BackendComparison c = compare_poisson_backends(m, 1e-2);
  CHECK(c.support_points > 0);
  CHECK(c.max_relative_difference < 5e-3);
  CHECK(c.reference_relative_difference == 0.0);
  const BackendComparison r = compare_poisson_backends(m, 1e-2, Point{3.0, 0.0, 0.0});
  CHECK(r.reference_relative_difference >= r.max_relative_difference * 0.5);
  CHECK(r.reference_relative_difference < 1e-2);
  // Without the background term the comparison degrades badly.
  const Field plain = poisson_potential(m, PoissonBackend::periodic_spectral).phi;
  const Field corrected = mean_corrected_periodic_potential(m);
  CHECK(std::abs((corrected[0] - plain[0]) - m.integral() / std::pow(16.0, 3) * 3 * 64.0 / 6) < 1e-12);
}

TEST_CASE("potential constant and the L-infinity bound") {
  CHECK(riesz_constant(3) == doctest::Approx(1 / (4 * pi)));
  CHECK_THROWS_AS(riesz_constant(2), UnsupportedDimension);
  const double k3 = 1.5 * std::pow(4 * pi, -2.0 / 3.0);
  CHECK(potential_constant(3) == doctest::Approx(k3).epsilon(1e-9));
  // Homogeneity: degree 1 - 2/N in the sup norm and 2/N in the mass.
  CHECK(split_radius_bound(3, 8.0, 1.0) == doctest::Approx(k3 * 2.0).epsilon(1e-9));
  CHECK(split_radius_bound(3, 1.0, 8.0) == doctest::Approx(k3 * 4.0).epsilon(1e-9));

  const Grid g(3, 32, 8.0);
  const Field bump = Field::from_function(g, [](const Point& x) { return std::exp(-erds::testing::r2(x)); });
  const PotentialBound b = potential_linfty_bound(bump);
  CHECK(b.lhs > 0.0);
  CHECK(b.lhs <= b.rhs);
  CHECK(b.constant == doctest::Approx(k3).epsilon(1e-9));

  const PotentialBound zero = potential_linfty_bound(Field(g));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK_THROWS_AS(potential_linfty_bound(-1.0 * bump), DomainError);
}

TEST_CASE("Holder quotient examples") {
  const double L = 8.0;
  const Grid g(2, 32, L);
  const FieldSeries constant = series_of(g, {0.0, 0.5, 1.0}, [](double, const Point&) { return 3.0; });
  const HolderEstimate c = holder_quotient(constant, 0.0);
  CHECK(c.alpha == 1.0);
  CHECK(c.constant == 0.0);

  const FieldSeries linear = series_of(g, {0.0, 1.0}, [](double, const Point& x) { return x[0]; });
  const HolderEstimate l = holder_quotient(linear, 0.0);
  CHECK(l.alpha == 1.0);
  CHECK(l.constant == doctest::Approx(2.0 / L));

  // A decaying sine mode: the alpha = 1 constant sits near max |grad phi| / ||phi||_inf = 2 pi / L.
  const double k = 2 * pi / L;
  const FieldSeries heat =
      series_of(g, {0.0, 0.25, 0.5, 0.75, 1.0}, [&](double t, const Point& x) { return std::exp(-k * k * t) * std::sin(k * x[0]); });
  const HolderEstimate h = holder_quotient(heat, 0.0);
  CHECK(h.alpha == 1.0);
  CHECK(h.constant <= 1.05 * k);
  CHECK(h.constant >= 0.5 * k);
  CHECK(holder_table(h).rows.size() == h.alphas.size());

  CHECK_THROWS_AS(holder_quotient(heat, 2.0), CoverageError);
}

TEST_CASE("weak norm scan and exponent helpers") {
  CHECK(weak_norm_exponent(1.0, 2.0) == doctest::Approx(1.0));
  CHECK(weak_norm_exponent(0.0, 2.0) == doctest::Approx(0.0));
  CHECK(critical_growth_exponent(1.0) == doctest::Approx(3.0));
  for (double a : {0.25, 0.5, 1.0}) CHECK(weak_norm_exponent(a, critical_growth_exponent(a)) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(critical_growth_exponent(0.0), DomainError);
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(loglog_slope({1.0}, {1.0}), InsufficientData);

  const Grid g(2, 32, 8.0);
  const Trajectory zero = erds::testing::make_trajectory(g, 0.0, 5.0, 0.125, [](double, const Point&) { return 0.0; });
  const WeakNormScan z = weak_norm_scan(zero, Point{}, 5.0, {0.25, 0.5, 1.0}, 2.0);
  CHECK(z.slope == 0.0);
  for (const auto& row : z.rows) CHECK(row.sup_mass == 0.0);

  // Constant data: M^(eps) = eps^2 M, so the B_2 mass scales like eps^2 when q = 2.
  const Trajectory flat = erds::testing::make_trajectory(g, 0.0, 5.0, 0.125, [](double, const Point&) { return 1.5; });
  const WeakNormScan f = weak_norm_scan(flat, Point{}, 5.0, {0.25, 0.5, 1.0}, 2.0);
  for (const auto& row : f.rows)
    CHECK(row.sup_mass == doctest::Approx(row.eps * row.eps * 1.5 * 4 * pi).epsilon(0.01));
  CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));

  // A smooth bump: the continuum limit is eps^2 |B_2| M(center).
  const Trajectory bump = erds::testing::make_trajectory(
      g, 0.0, 1.0, 1.0 / 64, [](double, const Point& x) { return std::exp(-erds::testing::r2(x)); });
  const WeakNormScan b = weak_norm_scan(bump, Point{}, 1.0, {0.5, 0.25, 0.125, 0.0625, 0.03125}, 2.0);
  CHECK(b.rows.back().sup_mass == doctest::Approx(std::pow(0.03125, 2) * 4 * pi).epsilon(0.02));
  CHECK(b.slope > 1.7);
  CHECK(b.slope < 2.0);
  CHECK_THROWS_AS(weak_norm_scan(bump, Point{}, 1.0, {1.0}, 2.0), CoverageError);
  CHECK(weak_norm_table(f).columns == std::vector<std::string>{"eps", "sup_mass_B2", "slope"});
}

}  // TEST_SUITE
