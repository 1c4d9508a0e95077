#include <doctest.h>

#include <cmath>
#include <random>

#include "erds/errors.hpp"
#include "erds/kinetics.hpp"

using namespace erds;

namespace {

std::vector<double> rates(const ReactionNetwork& net, std::vector<double> a) {
  std::vector<double> q(a.size());
  net.rates(a, q);
  return q;
}

// Independent mass-action oracle: loop over reactions, accumulate stoichiometry times rate.
std::vector<double> brute_force(const std::vector<Reaction>& rx, const std::vector<double>& a) {
  std::vector<double> q(a.size(), 0.0);
  for (const auto& r : rx) {
    double fwd = r.forward_rate, bwd = r.backward_rate;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (int k = 0; k < r.reactants[i]; ++k) fwd *= a[i];
      for (int k = 0; k < r.products[i]; ++k) bwd *= a[i];
    }
    for (std::size_t i = 0; i < a.size(); ++i) q[i] += (r.products[i] - r.reactants[i]) * (fwd - bwd);
  }
  return q;
}

Reaction make(std::vector<int> lhs, std::vector<int> rhs, double k = 1.0) { return Reaction{lhs, rhs, k, k}; }

}  // namespace

TEST_SUITE("kinetics") {

TEST_CASE("four-species rates") {
  const auto net = ReactionNetwork::four_species();
  for (double v : rates(net, {1, 1, 1, 1})) CHECK(v == 0.0);
  const auto q = rates(net, {0, 2, 0, 3});
  CHECK(q == std::vector<double>{6, -6, 6, -6});
}

TEST_CASE("relabelling 1<->2, 3<->4 permutes Q and flips the net reaction") {
  const auto net = ReactionNetwork::four_species();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> a{u(rng), u(rng), u(rng), u(rng)};
    const auto q = rates(net, a);
    const auto qs = rates(net, {a[1], a[0], a[3], a[2]});
    CHECK(qs[0] == doctest::Approx(q[1]));
    CHECK(qs[1] == doctest::Approx(q[0]));
    CHECK(qs[2] == doctest::Approx(q[3]));
    CHECK(qs[3] == doctest::Approx(q[2]));
    CHECK(qs[0] == doctest::Approx(-q[0]));
  }
}

TEST_CASE("random three-reaction networks match the per-reaction oracle and conserve mass") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(0, 2);
  std::uniform_real_distribution<double> rate(0.1, 3.0), conc(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Reaction> rx;
    while (rx.size() < 3) {
      std::vector<int> l(4), r(4);
      for (auto& v : l) v = coef(rng);
      for (auto& v : r) v = coef(rng);
      int sl = 0, sr = 0;
      for (int i = 0; i < 4; ++i) {
        sl += l[i];
        sr += r[i];
      }
      if (sl != sr || sl == 0 || sl > 3 || l == r) continue;
      rx.push_back(make(l, r, rate(rng)));
    }
    const ReactionNetwork net(4, rx, 3.0);
    CHECK(net.structural_issues().empty());
    const std::vector<double> a{conc(rng), conc(rng), conc(rng), conc(rng)};
    const auto q = rates(net, a);
    const auto oracle = brute_force(rx, a);
    double sum = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(q[i] == doctest::Approx(oracle[i]).scale(1.0).epsilon(1e-12));
      sum += q[i];
      scale = std::max(scale, std::abs(q[i]));
    }
    CHECK(std::abs(sum) <= 1e-14 * scale);
    // Entropy production is nonpositive for k_f = k_b.
    CHECK(entropy_production(net, std::vector<double>{a[0] + 0.1, a[1] + 0.1, a[2] + 0.1, a[3] + 0.1}) <= 1e-12);
  }
}

TEST_CASE("hypothesis report for the four-species network") {
  const auto net = ReactionNetwork::four_species();
  const HypothesisReport rep = check_hypotheses(net, 3000);
  CHECK(rep.accepted());
  CHECK(rep.h3_symbolic);
  CHECK(rep.h2_worst >= -kHypothesisTolerance);
  CHECK(rep.h4_worst <= kHypothesisTolerance);
  CHECK(entropy_production(net, std::vector<double>{1, 2, 1, 2}) == doctest::Approx(-3.0 * std::log(4.0)));
  CHECK(-3.0 * std::log(4.0) == doctest::Approx(-4.1589).epsilon(1e-4));
}

TEST_CASE("sign convention: negative inputs are clamped before evaluation") {
  const auto net = ReactionNetwork::four_species();
  const std::vector<double> a{-0.5, 1, 1, 1};
  std::vector<double> clamped(4), raw(4);
  net.rates(a, clamped);
  net.rates_unclamped(a, raw);
  CHECK(raw[0] == doctest::Approx(1.5));
  CHECK(clamped[0] == doctest::Approx(1.0));
}

TEST_CASE("unbalanced networks are rejected") {
  const ReactionNetwork net(1, {make({1}, {2})}, 2.0);
  const auto rep = check_hypotheses(net, 200);
  CHECK_FALSE(rep.h3_symbolic);
  CHECK_FALSE(rep.h3_ok);
  CHECK_FALSE(rep.accepted());
  CHECK_FALSE(net.structural_issues().empty());
  CHECK_THROWS_AS(parse_network("1: A1 -> 2 A1\n"), ParseError);
}

TEST_CASE("growth exponent fits") {
  const std::vector<double> radii{0.1, 1.0, 10.0, 100.0, 1000.0};
  CHECK(estimate_growth(ReactionNetwork::four_species(), radii).exponent == doctest::Approx(2.0).epsilon(0.025));
  const ReactionNetwork linear(2, {make({1, 0}, {0, 1})}, 1.0);
  CHECK(estimate_growth(linear, radii).exponent == doctest::Approx(1.0).epsilon(0.05));
  const ReactionNetwork cubic(4, {make({1, 1, 1, 0}, {0, 0, 0, 3})}, 3.0);
  CHECK(estimate_growth(cubic, radii).exponent == doctest::Approx(3.0).epsilon(0.017));
  CHECK_THROWS_AS(estimate_growth(linear, std::vector<double>{1.0, 10.0}), DomainError);
}

TEST_CASE("network file parser") {
  const auto net = parse_network(R"(# the quadratic example
species = 4
q = 2
1: A1 + A3 <-> A2 + A4
)");
  CHECK(net.species_count() == 4);
  CHECK(net.growth_exponent() == 2.0);
  CHECK(rates(net, {0, 2, 0, 3}) == std::vector<double>{6, -6, 6, -6});

  try {
    (void)parse_network("species = 2\nfoo = 3\n1: A1 -> A3\n2: A1 -> A1 + A2\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.diagnostics().size() >= 3);
  }
}

}  // TEST_SUITE
