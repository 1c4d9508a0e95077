// erds: simulate reaction-diffusion experiments and check their estimates.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "erds/config.hpp"
#include "erds/errors.hpp"
#include "erds/experiment.hpp"
#include "erds/kinetics.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<long long> seed;
  std::optional<int> threads;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "experiment config file")->check(CLI::ExistingFile);
  if (config_required) opt->required();
  cmd->add_option("--out", c.out, "output directory (overrides [run] output)");
  cmd->add_option("--seed", c.seed, "random seed (overrides [run] seed)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", c.threads, "worker threads; falls back to $ENTROPY_RDS_THREADS")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", c.quiet, "only report failures");
}

erds::ExperimentConfig configure(const Common& c) {
  erds::ExperimentConfig cfg = erds::load_config(c.config);
  if (!c.out.empty()) cfg.output = c.out;
  if (c.seed) cfg.seed = static_cast<std::uint64_t>(*c.seed);
  if (c.threads) {
    cfg.threads = *c.threads;
  } else if (const char* env = std::getenv("ENTROPY_RDS_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) cfg.threads = t;
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-numeric ENTROPY_RDS_THREADS='" << env << "'\n";
    }
  }
  return cfg;
}

int finish(const erds::RunResult& r, bool quiet) {
  if (!quiet) std::cout << "wrote " << (r.output_dir / "summary.json").string() << "\n";
  for (const auto& f : r.failed_invariants) std::cerr << "FAIL " << f << "\n";
  if (!quiet && r.failed_invariants.empty()) std::cout << "all hard invariants hold\n";
  return r.exit_status;
}

int verify_network(const std::string& network_path, const std::string& config_path, int samples, bool quiet) {
  erds::ReactionNetwork net = erds::ReactionNetwork::four_species();
  if (!network_path.empty()) net = erds::load_network_file(network_path);
  else if (!config_path.empty()) net = erds::load_config(config_path).network;

  const erds::HypothesisReport rep = erds::check_hypotheses(net, samples);
  const std::vector<double> radii{1.0, 10.0, 100.0, 1000.0};
  const erds::GrowthFit growth = erds::estimate_growth(net, radii);
  const auto issues = net.structural_issues();
  if (!quiet) {
    std::cout << "species            " << net.species_count() << "\n"
              << "reactions          " << net.reactions().size() << "\n"
              << "declared q         " << net.growth_exponent() << "\n"
              << "fitted q           " << growth.exponent << (growth.degenerate ? " (degenerate)" : "") << "\n"
              << "sign preservation  " << (rep.h2_ok ? "ok" : "FAIL") << "  worst " << rep.h2_worst << "\n"
              << "mass conservation  " << (rep.h3_ok ? "ok" : "FAIL") << "  worst " << rep.h3_worst << "\n"
              << "entropy production " << (rep.h4_ok ? "ok" : "FAIL") << "  worst " << rep.h4_worst << "\n";
    for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
  }
  for (const auto& s : issues) std::cerr << "structural: " << s << "\n";
  const bool ok = rep.accepted() && issues.empty();
  if (!ok) std::cerr << "network rejected\n";
  return ok ? 0 : 1;
}

int report(const fs::path& dir) {
  std::ifstream in(dir / "summary.json");
  if (!in) {
    std::cerr << "no summary.json in " << dir.string() << "\n";
    return 2;
  }
  const nlohmann::json s = nlohmann::json::parse(in);
  std::cout << "seed " << s.value("seed", 0ULL) << ", simulation "
            << s["simulation"].value("status", std::string("unknown")) << "\n";
  for (const auto& [name, inv] : s["invariants"].items()) {
    const bool pass = inv["pass"].get<bool>();
    std::cout << (pass ? "PASS " : "FAIL ") << std::left << std::setw(32) << name << " value "
              << std::setw(14) << inv["value"].dump() << " " << inv["comparison"].get<std::string>() << " "
              << inv["threshold"].dump() << (inv["hard"].get<bool>() ? "" : "  (soft)") << "\n";
  }
  if (s.contains("analyses"))
    for (const auto& [name, a] : s["analyses"].items())
      if (a.value("status", std::string()) != "ok")
        std::cout << name << ": " << a.value("status", std::string()) << " " << a.value("message", a.value("reason", std::string()))
                  << "\n";
  return s.value("exit_status", 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reaction-diffusion simulations with entropy, mass, potential, duality and De Giorgi diagnostics"};
  app.require_subcommand(1);

  Common sim_opts, analyze_opts;
  auto* sim = app.add_subcommand("simulate", "run the simulation and every requested analysis");
  add_common(sim, sim_opts, true);

  auto* analyze = app.add_subcommand("analyze", "re-run the analyses on a stored trajectory");
  add_common(analyze, analyze_opts, true);
  std::string trajectory_dir;
  analyze->add_option("--trajectory", trajectory_dir, "directory written by simulate")
      ->required()
      ->check(CLI::ExistingDirectory);

  auto* verify = app.add_subcommand("verify-network", "check sign preservation, conservation and entropy production");
  std::string network_path, verify_config;
  int samples = 5000;
  bool verify_quiet = false;
  auto* net_opt = verify->add_option("--network", network_path, "network file")->check(CLI::ExistingFile);
  verify->add_option("--config", verify_config, "take the network from a config")
      ->check(CLI::ExistingFile)
      ->excludes(net_opt);
  verify->add_option("--samples", samples, "random states to test")->check(CLI::PositiveNumber);
  verify->add_flag("--quiet", verify_quiet, "only report failures");

  auto* rep = app.add_subcommand("report", "print the invariant table of a finished run");
  std::string report_config, report_out;
  rep->add_option("--config", report_config, "config whose output directory to read")->check(CLI::ExistingFile);
  rep->add_option("--out", report_out, "output directory to read");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const erds::ExperimentConfig cfg = configure(sim_opts);
      if (!sim_opts.quiet) std::cout << "simulating into " << cfg.output.string() << "\n";
      return finish(erds::run_experiment(cfg), sim_opts.quiet);
    }
    if (*analyze) {
      const erds::ExperimentConfig cfg = configure(analyze_opts);
      const erds::Trajectory traj = erds::read_trajectory(trajectory_dir);
      return finish(erds::analyze_trajectory(cfg, traj), analyze_opts.quiet);
    }
    if (*verify) return verify_network(network_path, verify_config, samples, verify_quiet);
    if (*rep) {
      fs::path dir = report_out;
      if (dir.empty()) {
        if (report_config.empty()) {
          std::cerr << "report needs --out or --config\n";
          return 2;
        }
        dir = erds::load_config(report_config).output;
      }
      return report(dir);
    }
  } catch (const erds::ParseError& e) {
    std::cerr << "invalid input:\n" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
