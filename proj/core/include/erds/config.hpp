#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erds/dynamics.hpp"
#include "erds/kinetics.hpp"

namespace erds {

enum class Analysis {
  mass_check,
  entropy_check,
  potential_bound,
  holder,
  weak_norm,
  fabes,
  abp,
  degiorgi_ladder,
  rescale_study
};

std::string to_string(Analysis a);
std::optional<Analysis> parse_analysis(std::string_view name);
const std::vector<Analysis>& all_analyses();

struct InitialSpec {
  std::string kind = "bumps";  ///< "bumps" or "uniform"
  double background = 0.1;
  double amplitude = 1.0;
  double sigma = 1.0;
  int bumps = 2;
  double value = 1.0;          ///< uniform level
};

/// A validated experiment description.
///
///   [network]     file (optional; the built-in four-species network otherwise)
///   [grid]        dim, n, length                                   (required)
///   [diffusion]   d (comma list, required), lower, upper
///   [scheme]      t_end (required), type, dt, negativity_tolerance, max_rejects,
///                 output_cadence, track_dissipation
///   [initial]     kind, background, amplitude, sigma, bumps, value
///   [run]         seed, analyses, output, threads, abp_members, abp_points
struct ExperimentConfig {
  std::optional<std::filesystem::path> network_file;
  ReactionNetwork network = ReactionNetwork::four_species();
  int dim = 2;
  int n = 64;
  double length = 8.0;
  std::vector<double> d;
  double lower = 0.0;
  double upper = 0.0;
  SimConfig sim;
  InitialSpec initial;
  std::uint64_t seed = 1;
  std::vector<Analysis> analyses;
  std::filesystem::path output = "erds_out";
  int threads = 1;
  int abp_members = 10;
  int abp_points = 32;

  Grid grid() const { return Grid(dim, n, length); }
  DiffusionCoeffs coeffs() const { return DiffusionCoeffs(d, lower, upper); }
};

/// Parses the sectioned key = value format. Relative paths resolve against
/// base_dir. Throws ParseError listing every problem with its line number.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace erds
