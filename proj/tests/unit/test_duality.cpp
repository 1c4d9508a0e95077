#include <doctest.h>

#include <cmath>
#include <numbers>

#include "erds/duality.hpp"
#include "erds/errors.hpp"
#include "erds/norms.hpp"
#include "erds/random_fields.hpp"
#include "support.hpp"

using namespace erds;
using std::numbers::pi;

namespace {

DualProblem constant_d_problem(SpaceTimeFunction f, double d = 1.0) {
  DualProblem p;
  p.f = std::move(f);
  p.d = [d](double, const Point&) { return d; };
  p.lower = d;
  p.upper = d;
  return p;
}

double cube_mode(const Point& x, int dim) {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= std::sin(pi * (x[a] + 2.0) / 4.0);
  return v;
}

}  // namespace

TEST_SUITE("duality") {

TEST_CASE("zero source gives the zero solution") {
  const DualSolution u = solve_dual_final(constant_d_problem([](double, const Point&) { return 0.0; }), 2, {16});
  for (const auto& frame : u.frames)
    for (double v : frame) CHECK(v == 0.0);
  CHECK(u.sup_abs_q2 == 0.0);
  CHECK_THROWS_AS(abp_ratio(u), UndefinedRatio);
}

TEST_CASE("a discrete Dirichlet eigenmode follows its scalar recursion") {
  const int dim = 2, n = 16;
  DualProblem p = constant_d_problem([](double, const Point& x) { return cube_mode(x, 2); });
  p.t_min = -1.0;
  p.mask_to_unit_cylinder = false;
  DualOptions o;
  o.n = n;
  o.ball_domain = false;
  const DualSolution u = solve_dual_final(p, dim, o);
  const double h = 4.0 / n;
  const double lambda = dim * 4.0 / (h * h) * std::pow(std::sin(pi * h / 8.0), 2);
  const auto steps = static_cast<int>(std::llround(1.0 / u.dt));
  const double amp = -(1.0 - std::pow(1.0 - u.dt * lambda, steps)) / lambda;
  REQUIRE(u.times.back() == doctest::Approx(-1.0));
  for (std::size_t x = 0; x < u.node_count(); ++x)
    CHECK(u.frames.back()[x] == doctest::Approx(amp * cube_mode(u.node_position(x), dim)).scale(1.0).epsilon(1e-12));
  // Continuous counterpart to discretization accuracy.
  const double lc = dim * pi * pi / 16.0;
  CHECK(amp == doctest::Approx(-(1.0 - std::exp(-lc)) / lc).epsilon(2e-2));
}

TEST_CASE("sign, linearity, final value and boundary") {
  auto f1 = [](double t, const Point& x) { return -std::exp(-4 * erds::testing::r2(x)) * (1 + t); };
  auto f2 = [](double, const Point& x) { return x[0] * std::exp(-erds::testing::r2(x)); };
  const SpaceTimeFunction d = [](double, const Point& x) { return 1.0 + 0.5 * std::sin(x[0] + x[1]); };
  auto problem = [&](SpaceTimeFunction f) {
    DualProblem p;
    p.f = std::move(f);
    p.d = d;
    p.lower = 0.5;
    p.upper = 1.5;
    return p;
  };
  DualOptions o;
  o.n = 16;
  o.store_every = 50;
  const DualSolution u1 = solve_dual_final(problem(f1), 2, o);
  const DualSolution u2 = solve_dual_final(problem(f2), 2, o);
  const DualSolution u12 = solve_dual_final(problem([&](double t, const Point& x) { return f1(t, x) + 3.0 * f2(t, x); }), 2, o);

  for (double v : u1.frames.front()) CHECK(v == 0.0);
  for (const auto& frame : u1.frames)
    for (double v : frame) CHECK(v >= 0.0);
  CHECK(u1.sup_abs_q2 > 0.0);
  REQUIRE(u12.frames.size() == u1.frames.size());
  for (std::size_t k = 0; k < u1.frames.size(); ++k)
    for (std::size_t x = 0; x < u1.node_count(); ++x) {
      CHECK(u12.frames[k][x] == doctest::Approx(u1.frames[k][x] + 3.0 * u2.frames[k][x]).scale(1.0).epsilon(1e-12));
      if (std::sqrt(erds::testing::r2(u1.node_position(x))) >= 2.0 - 1e-12) CHECK(u1.frames[k][x] == 0.0);
    }

  // The ratio is invariant under f -> c f.
  const DualSolution scaled = solve_dual_final(problem([&](double t, const Point& x) { return -7.0 * f1(t, x); }), 2, o);
  CHECK(abp_ratio(scaled) == doctest::Approx(abp_ratio(u1)).epsilon(1e-12));

  DualProblem bad = problem(f1);
  bad.upper = 1.2;
  CHECK_THROWS_AS(solve_dual_final(bad, 2, o), DomainError);
  DualOptions big_dt = o;
  big_dt.dt = 1.0;
  CHECK_THROWS_AS(solve_dual_final(problem(f1), 2, big_dt), DomainError);
}

TEST_CASE("random dual problems respect their bounds") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const DualProblem p = random_dual_problem(2, seed, 0.5, 2.0);
    const DualSolution u = solve_dual_final(p, 2, {16});
    const double r = abp_ratio(u);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
  const auto rows = abp_ensemble(2, 16, 3, 5);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(row.ratio > 0.0);
}

TEST_CASE("ensemble summaries") {
  std::vector<EnsembleRow> rows;
  for (int k = 1; k <= 20; ++k) rows.push_back({static_cast<std::uint64_t>(k), 16, 0.5, 2.0, static_cast<double>(21 - k)});
  CHECK(ensemble_max(rows) == 20.0);
  CHECK(ensemble_p95(rows) == 19.0);
  const CsvTable t = ensemble_table(rows, "abp");
  CHECK(t.rows.size() == 22);
  CHECK(t.rows[20].back() == 1.0);
  CHECK(t.rows[21].back() == 2.0);
}

TEST_CASE("Fabes duality examples") {
  const Grid g(3, 16, 8.0);
  const double c = 2.5;
  const Trajectory flat = erds::testing::make_trajectory(g, -4.0, 0.0, 0.125, [c](double, const Point&) { return c; });
  const FabesResult r = fabes_duality_check(flat);
  const double q1 = 1.0 * region_volume(g, Region::ball(Point{}, 1.0));
  CHECK(r.lhs == doctest::Approx(c * std::pow(q1, 0.75)));
  CHECK(r.rhs_factor == doctest::Approx(c * region_volume(g, Region::ball(Point{}, 2.0))));
  CHECK(r.ratio == doctest::Approx(std::pow(q1, 0.75) / region_volume(g, Region::ball(Point{}, 2.0))));

  auto shape = [](double t, const Point& x) { return (2.0 + t) * std::exp(-erds::testing::r2(x)) + 0.1; };
  const Trajectory one = erds::testing::make_trajectory(g, -4.0, 0.0, 0.125, shape);
  const Trajectory three = erds::testing::make_trajectory(g, -4.0, 0.0, 0.125,
                                                          [&](double t, const Point& x) { return 3.0 * shape(t, x); });
  CHECK(fabes_duality_check(three).ratio == doctest::Approx(fabes_duality_check(one).ratio));

  const Trajectory zero = erds::testing::make_trajectory(g, -4.0, 0.0, 0.125, [](double, const Point&) { return 0.0; });
  CHECK(fabes_duality_check(zero).ratio == 0.0);
  const Trajectory short_traj = erds::testing::make_trajectory(g, -1.0, 0.0, 0.125, shape);
  CHECK_THROWS_AS(fabes_duality_check(short_traj), CoverageError);
}

TEST_CASE("oscillation decay examples") {
  const Grid g(2, 32, 8.0);
  const Cylinder outer{2.0, Point{}, 4.0};
  const Cylinder inner{0.5, Point{}, 4.0};
  const SpaceTimeFunction unit = [](double, const Point&) { return 1.0; };

  const FieldSeries flat = evolve_nondivergence(Field(g, 2.0), unit, 1.0, 1.0, 0.0, 4.0, 0.0, 8);
  CHECK(oscillation_decay(flat, outer, inner) == 0.0);

  const Field mode = Field::from_function(g, [](const Point& x) { return std::sin(pi * x[0] / 4.0); });
  const FieldSeries heat = evolve_nondivergence(mode, unit, 1.0, 1.0, 0.0, 4.0, 0.0, 8);
  const double ratio = oscillation_decay(heat, outer, inner);
  CHECK(ratio > 0.0);
  CHECK(ratio < 1.0);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const RandomSmoothFunction d(2, seed, 0.5, 2.0, 4, 1.5, true);
    const RandomSmoothFunction init(2, seed + 100, -1.0, 1.0);
    const FieldSeries phi = evolve_nondivergence(sample_field(g, init), std::cref(d), 0.5, 2.0, 0.0, 4.0, 0.0, 8);
    const double r = oscillation_decay(phi, outer, inner);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}

}  // TEST_SUITE
