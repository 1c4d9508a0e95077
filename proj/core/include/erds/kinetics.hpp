#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "erds/trajectory.hpp"

namespace erds {

/// Reversible mass-action reaction  sum_i nu_i A_i <-> sum_i mu_i A_i.
struct Reaction {
  std::vector<int> reactants;  ///< nu, one entry per species
  std::vector<int> products;   ///< mu, one entry per species
  double forward_rate = 1.0;
  double backward_rate = 1.0;

  int reactant_order() const;
  int product_order() const;
  bool balanced() const { return reactant_order() == product_order(); }
};

/// Stoichiometry, rates and the declared growth data (q, growth constant)
/// of a reaction term Q : R^p -> R^p.
class ReactionNetwork {
 public:
  ReactionNetwork(int species, std::vector<Reaction> reactions, double growth_exponent = 2.0,
                  double growth_constant = 1.0);

  /// A1 + A3 <-> A2 + A4 with unit rates: Q_i = (-1)^{i+1} (a2 a4 - a1 a3).
  static ReactionNetwork four_species();

  int species_count() const noexcept { return species_; }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  double growth_exponent() const noexcept { return growth_exponent_; }
  double growth_constant() const noexcept { return growth_constant_; }

  /// Q(a) with negative inputs clamped to zero first.
  void rates(std::span<const double> a, std::span<double> out) const;
  /// Q(a) evaluated on raw inputs; only used to document the clamp convention.
  void rates_unclamped(std::span<const double> a, std::span<double> out) const;

  /// Human-readable list of violated structural requirements: unbalanced
  /// reactions, k_f != k_b, or reaction order above the declared q.
  std::vector<std::string> structural_issues() const;

 private:
  void accumulate(std::span<const double> a, std::span<double> out) const;

  int species_;
  std::vector<Reaction> reactions_;
  double growth_exponent_;
  double growth_constant_;
};

/// Pointwise Q_i(a(x)) for every species.
std::vector<Field> reaction_rate(const ReactionNetwork& net, const SpeciesState& state);

struct HypothesisReport {
  bool h2_ok = true;
  bool h3_ok = true;
  bool h4_ok = true;
  /// Smallest Q_i over samples with a_i <= 0, inputs clamped (must be >= 0).
  double h2_worst = 0.0;
  /// Same quantity with the clamp disabled, recorded for reference only.
  double h2_worst_unclamped = 0.0;
  bool h3_symbolic = true;
  /// Largest |sum_i Q_i| relative to 1 + max |Q_i| over samples.
  double h3_worst = 0.0;
  /// Largest sum_i Q_i ln a_i over strictly positive samples (must be <= 0).
  double h4_worst = 0.0;
  int samples = 0;
  std::vector<std::string> notes;

  bool accepted() const noexcept { return h2_ok && h3_ok && h4_ok; }
};

inline constexpr double kHypothesisTolerance = 1e-12;

/// Machine check of sign preservation (h2), mass conservation (h3) and
/// entropy dissipation (h4) on seeded random states.
HypothesisReport check_hypotheses(const ReactionNetwork& net, int samples, std::uint64_t seed = 20240101);

/// sum_i Q_i(a) ln a_i at a strictly positive state.
double entropy_production(const ReactionNetwork& net, std::span<const double> a);

struct GrowthFit {
  double exponent = 1.0;  ///< fitted q
  double constant = 0.0;  ///< fitted growth constant
  bool degenerate = false;
  std::vector<double> radii;
  std::vector<double> max_gradient;  ///< max_{|a|=R} max_i |grad_a Q_i(a)|
};

/// Log-log regression of the Jacobian growth against |a|. Radii must span
/// at least two decades.
GrowthFit estimate_growth(const ReactionNetwork& net, std::span<const double> radii, int directions = 2000,
                          std::uint64_t seed = 7);

/// Parses the plain-text network format; throws ParseError listing every bad line.
ReactionNetwork parse_network(std::string_view text);
ReactionNetwork load_network_file(const std::string& path);

}  // namespace erds
