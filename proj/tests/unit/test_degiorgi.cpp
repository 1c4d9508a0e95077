#include <doctest.h>

#include <cmath>
#include <numbers>

#include "erds/degiorgi.hpp"
#include "erds/errors.hpp"
#include "erds/norms.hpp"
#include "support.hpp"

using namespace erds;
using std::numbers::pi;

namespace {

Trajectory flat_trajectory(const Grid& g, double value) {
  return erds::testing::make_trajectory(g, -1.0, 0.0, 1.0 / 32, [value](double, const Point&) { return value; });
}

}  // namespace

TEST_SUITE("degiorgi") {

TEST_CASE("entropy function H and Psi") {
  CHECK(entropy_H(0.0) == 0.0);
  CHECK(entropy_H(-0.5) == 0.0);
  CHECK(entropy_H(1.0) == doctest::Approx(2 * std::log(2.0) - 1));
  CHECK(entropy_H(1e-8) == doctest::Approx(0.5e-16).epsilon(1e-6));
  double prev = 0.0, prev_slope = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double z = 0.05 * k;
    const double h = entropy_H(z);
    CHECK(h > prev);
    CHECK(h - prev >= prev_slope - 1e-15);  // convex
    CHECK(h <= 2 * z * (1 + std::abs(std::log(z))));
    prev_slope = h - prev;
    prev = h;
  }
  CHECK(Psi(3.0) == doctest::Approx(1.0));
  CHECK(Psi(1e-12) == doctest::Approx(0.5e-12).epsilon(1e-9));
  CHECK(Psi(-1.0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(Psi(-1.5), DomainError);
  CHECK(LevelSequence::k(0) == 0.0);
  CHECK(LevelSequence::k(3) == 0.875);
  CHECK(LevelSequence::t(0) == 0.5);
  CHECK(LevelSequence::t(2) == doctest::Approx(0.3125));
}

TEST_CASE("level-set energy examples") {
  const Grid g(3, 32, 4.0);
  // a = 2 everywhere, j = 0: only the entropy term survives.
  const Trajectory two = flat_trajectory(g, 2.0);
  const double lattice = entropy_H(2.0) * region_volume(g, Region::ball(Point{}, 0.5));
  CHECK(level_set_energy(two, 0) == doctest::Approx(lattice).epsilon(1e-12));
  CHECK(level_set_energy(two, 0) == doctest::Approx(entropy_H(2.0) * 4 * pi / 3 * 0.125).epsilon(0.03));

  LevelEnergyOptions at_two;
  at_two.eta = 2.0;
  CHECK(level_set_energy(two, 0, at_two) == 0.0);
  CHECK(level_set_energy(flat_trajectory(g, 0.4), 1) == 0.0);

  const Trajectory sparse = erds::testing::make_trajectory(g, -1.0, 0.0, 0.25, [](double, const Point&) { return 2.0; });
  CHECK_THROWS_AS(level_set_energy(sparse, 0), InsufficientData);
  const Trajectory short_traj =
      erds::testing::make_trajectory(g, -0.25, 0.0, 1.0 / 32, [](double, const Point&) { return 2.0; });
  CHECK_THROWS_AS(level_set_energy(short_traj, 0), CoverageError);
}

TEST_CASE("the gradient term is at most a quarter of the Dirichlet energy of a") {
  // On {a > eta} the map a -> sqrt(1 + a - eta) is 1/2-Lipschitz.
  const Grid g(3, 32, 4.0);
  const double slope = 0.3;
  const Trajectory ramp = erds::testing::make_trajectory(
      g, -1.0, 0.0, 1.0 / 32, [slope](double, const Point& x) { return 5.0 + slope * x[0]; });
  LevelEnergyOptions opt;
  opt.eta = 0.0;
  const double u = level_set_energy(ramp, 0, opt);
  const double ball = region_volume(g, Region::ball(Point{}, 0.5));
  const double entropy_part = entropy_H(5.0 + slope * 0.5) * ball;  // loose upper bound on the sup term
  CHECK(u <= entropy_part + 0.5 * 0.25 * slope * slope * ball * 1.0 + 1e-12);
}

TEST_CASE("level-set energy decreases in eta for smooth decaying data") {
  const Grid g(3, 32, 4.0);
  const Trajectory traj = erds::testing::make_trajectory(g, -1.0, 0.0, 1.0 / 32, [](double t, const Point& x) {
    const double s = 2.0 + t;
    return 1.5 * std::exp(-erds::testing::r2(x) / (2 * s)) / std::pow(s, 1.5);
  });
  double prev = kInfinity;
  for (double eta : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    LevelEnergyOptions opt;
    opt.eta = eta;
    const double u = level_set_energy(traj, 0, opt);
    CHECK(u <= prev);
    prev = u;
  }
}

TEST_CASE("recursion orbit examples") {
  CHECK(recursion_exponent(2.0) == 2.0);
  CHECK(recursion_exponent(1.5) == doctest::Approx(6.0));
  CHECK_THROWS_AS(recursion_exponent(1.0), DomainError);

  const RecursionOrbit small = recursion_simulate(0.2, 2.0, 2.0, 60);
  CHECK(small.kappa == doctest::Approx(0.25));
  CHECK(small.values[1] == doctest::Approx(2 * 0.04));
  CHECK(small.values[2] == doctest::Approx(4 * 0.0064));
  CHECK(small.verdict == OrbitVerdict::converged);
  CHECK(small.values.back() == 0.0);

  const RecursionOrbit big = recursion_simulate(0.3, 2.0, 2.0, 60);
  CHECK(big.verdict == OrbitVerdict::diverged);
  CHECK(big.first_overflow > 0);
  CHECK(std::isinf(big.values.back()));

  // Started exactly at kappa the orbit decays only geometrically.
  const RecursionOrbit edge = recursion_simulate(0.25, 2.0, 2.0, 20);
  CHECK(edge.verdict == OrbitVerdict::undecided);
  for (int k = 0; k <= 20; ++k) CHECK(edge.values[k] == doctest::Approx(std::pow(2.0, -k - 2.0)).epsilon(1e-9));

  CHECK(to_string(OrbitVerdict::diverged) == "diverged");
  CHECK(recursion_simulate(0.0, 2.0, 2.0, 5).verdict == OrbitVerdict::converged);
  CHECK_THROWS_AS(recursion_simulate(0.1, 1.0, 2.0, 5), DomainError);
}

TEST_CASE("ladder fit recovers synthetic recursions") {
  const double lambda = 1.5, gamma = 1.4;
  std::vector<double> ladder{0.01};
  for (int j = 1; j <= 6; ++j) ladder.push_back(std::pow(lambda, j) * std::pow(ladder.back(), gamma));
  const LadderFit fit = ladder_fit(ladder, 3);
  CHECK_FALSE(fit.skipped);
  CHECK(fit.lambda == doctest::Approx(lambda).epsilon(0.01));
  CHECK(fit.gamma == doctest::Approx(gamma).epsilon(0.01));
  CHECK(fit.converges);
  CHECK(fit.favored_exponent == "1+2/N");

  std::vector<double> growing{0.9};
  for (int j = 1; j <= 6; ++j) growing.push_back(std::pow(3.0, j) * std::pow(growing.back(), 2.6));
  const LadderFit g = ladder_fit(growing, 3);
  CHECK(g.gamma == doctest::Approx(2.6).epsilon(0.01));
  CHECK(g.favored_exponent == "1+N/2");
  CHECK_FALSE(g.converges);

  const LadderFit zero = ladder_fit(std::vector<double>(11, 0.0), 3);
  CHECK(zero.skipped);
  CHECK(zero.converges);
  CHECK_THROWS_AS(ladder_fit({1.0, 0.5, 0.1, 0.0, 0.0}, 3), InsufficientData);
  CHECK_THROWS_AS(ladder_fit({1.0, -0.5, 0.1, 0.1}, 3), DomainError);

  CHECK(interpolation_exponent(3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(interpolation_exponent(2), UnsupportedDimension);
}

TEST_CASE("smallness test on zero and small data") {
  const Grid g(3, 16, 4.0);
  const SmallnessReport zero = smallness_boundedness_test(flat_trajectory(g, 0.0), 4.0 / 3.0);
  CHECK(zero.lr_norm == 0.0);
  CHECK(zero.center_value == 0.0);
  CHECK(zero.center_bounded);
  CHECK(zero.ladder_small);
  REQUIRE(zero.ladder.values.size() == 11);
  CHECK(zero.ladder.fit.has_value());
  CHECK(zero.ladder.fit->skipped);
  CHECK(ladder_table(zero.ladder).rows.size() == 11);

  const SmallnessReport small = smallness_boundedness_test(flat_trajectory(g, 0.3), 4.0 / 3.0);
  CHECK(small.center_value == doctest::Approx(0.3));
  CHECK(small.center_bounded);
  CHECK(small.ladder.values.front() > 0.0);
  CHECK(small.ladder.values[1] == 0.0);
  CHECK(small.ladder_small);
  CHECK_THROWS_AS(smallness_boundedness_test(flat_trajectory(g, 0.3), 0.5), DomainError);
}

TEST_CASE("c_beta fit") {
  const double c = fit_c_beta(2.0, 0.5, 0.1, 100.0);
  CHECK(std::isfinite(c));
  const double z = 1.0;
  CHECK(c >= std::pow(1 + z, 2.0) * std::log1p(z) / std::pow(Psi(z), 5.0));
  // The ratio blows up like z^{-2 gamma} at the origin.
  CHECK(fit_c_beta(2.0, 0.5, 0.01, 100.0) > 100.0 * c);
  CHECK_THROWS_AS(fit_c_beta(2.0, 0.5, 0.0, 1.0), DomainError);
}

}  // TEST_SUITE
