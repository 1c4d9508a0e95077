#include "erds/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <random>

#include <json.hpp>

#include "erds/csv.hpp"
#include "erds/degiorgi.hpp"
#include "erds/duality.hpp"
#include "erds/errors.hpp"
#include "erds/mass_analysis.hpp"
#include "erds/random_fields.hpp"

namespace erds {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<RescaleRow> rescale_study(const Trajectory& traj, const ReactionNetwork& net, const DiffusionCoeffs& coeffs,
                                      const Point& center, double center_t, const std::vector<double>& eps_list,
                                      double q) {
  auto l2 = [](const std::vector<Field>& r) {
    double s = 0.0;
    for (const auto& f : r) {
      const double v = lp_norm(f, Region::all(), 2.0);
      s += v * v;
    }
    return std::sqrt(s);
  };
  const int dim = traj.grid().dim();
  std::vector<RescaleRow> rows;
  for (double eps : eps_list) {
    Trajectory zoom;
    try {
      zoom = rescale(traj, center, center_t, eps, q);
    } catch (const CoverageError&) {
      continue;
    }
    RescaleRow row;
    row.eps = eps;
    row.source_residual = l2(pde_residual(traj, net, coeffs, center_t - 2.0 * eps * eps));
    row.rescaled_residual = l2(pde_residual(zoom, net, coeffs, -2.0));
    row.ratio = row.source_residual > 0.0 ? row.rescaled_residual / row.source_residual : 0.0;
    row.predicted_ratio = std::pow(eps, 2.0 / (q - 1.0) + 2.0 - dim / 2.0);
    rows.push_back(row);
  }
  return rows;
}

SpeciesState initial_state(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Grid grid = cfg.grid();
  const auto p = static_cast<std::size_t>(cfg.network.species_count());
  const InitialSpec& s = cfg.initial;
  if (s.kind == "uniform") {
    SpeciesState st;
    for (std::size_t i = 0; i < p; ++i) st.species.emplace_back(grid, s.value);
    return st;
  }
  return random_bump_state(grid, p, seed, s.background, s.amplitude, s.sigma, s.bumps);
}

namespace {

struct Seeds {
  std::uint64_t initial, hypotheses, holder, abp;
  explicit Seeds(std::uint64_t master) {
    std::mt19937_64 gen(master);
    initial = gen();
    hypotheses = gen();
    holder = gen();
    abp = gen();
  }
};

json invariant(double value, double threshold, bool hard, bool pass, const char* comparison = "<=") {
  return {{"value", value}, {"threshold", threshold}, {"comparison", comparison}, {"hard", hard}, {"pass", pass}};
}

struct Context {
  const ExperimentConfig& cfg;
  const Trajectory& traj;
  DiffusionCoeffs coeffs;
  Seeds seeds;
  fs::path out;
};

double total(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double state_mass(const SpeciesState& s) {
  double m = 0.0;
  for (const auto& f : s.species) m += f.integral();
  return m;
}

json mass_check(const Context& c) {
  json r;
  const double m0 = state_mass(c.traj.states().front());
  double drift = 0.0;
  CsvTable t;
  t.columns = {"time", "total_mass", "relative_drift"};
  t.units = "total_mass = sum_i int a_i dx; relative_drift = |m(t) - m(0)| / m(0)";
  auto consider = [&](double time, double m) {
    const double d = m0 > 0.0 ? std::abs(m - m0) / m0 : std::abs(m - m0);
    drift = std::max(drift, d);
    t.add_row({time, m, d});
  };
  consider(c.traj.t_begin(), m0);
  for (const auto& rec : c.traj.step_log()) consider(rec.time, total(rec.mass));
  for (const auto& s : c.traj.states()) drift = std::max(drift, std::abs(state_mass(s) - m0) / std::max(m0, 1e-300));
  t.write(c.out / "mass.csv");
  r["values"] = {{"initial_mass", m0}, {"mass_drift", drift}};
  r["invariants"]["mass_drift"] = invariant(drift, 1e-10, true, drift <= 1e-10);
  if (c.coeffs.all_equal()) {
    const FieldSeries m = mass_series(c.traj);
    const double sup0 = m.front().field.max();
    double sup = sup0;
    for (const auto& f : m) sup = std::max(sup, f.field.max());
    r["invariants"]["max_principle_excess"] = invariant(sup - sup0, 1e-8, true, sup - sup0 <= 1e-8);
  }
  return r;
}

json entropy_check(const Context& c) {
  const auto& log = c.traj.step_log();
  if (log.empty()) throw InsufficientData("entropy_check: the trajectory has no step log");
  const bool have_dissipation =
      std::any_of(log.begin(), log.end(), [](const StepRecord& s) { return s.dissipation != 0.0; });
  if (!have_dissipation) throw InsufficientData("entropy_check: dissipation was not tracked (track_dissipation = false)");
  const std::vector<double> residual = entropy_residuals(log, c.coeffs.lower);
  CsvTable t;
  t.columns = {"time", "dt", "entropy", "dissipation", "residual", "residual_over_dt"};
  t.units = "residual = dE/dt + 4 lower * dissipation (discrete, step-averaged); must stay <= 10 dt";
  double worst = -kInfinity;
  for (std::size_t k = 1; k < log.size(); ++k) {
    const double ratio = residual[k] / log[k].dt;
    worst = std::max(worst, ratio);
    t.add_row({log[k].time, log[k].dt, log[k].entropy, log[k].dissipation, residual[k], ratio});
  }
  t.write(c.out / "entropy.csv");
  json r;
  r["values"] = {{"max_residual_over_dt", worst}};
  r["invariants"]["entropy_residual_over_dt"] = invariant(worst, 10.0, true, worst <= 10.0);
  return r;
}

json potential_bound(const Context& c) {
  json r;
  if (c.traj.grid().dim() != 3) {
    r["status"] = "skipped";
    r["reason"] = "the free-space potential bound is implemented for N = 3";
    return r;
  }
  const PotentialBound b = potential_linfty_bound(total_mass(c.traj.states().front()));
  r["values"] = {{"lhs", b.lhs}, {"rhs", b.rhs}, {"constant", b.constant}};
  const double ratio = b.rhs > 0.0 ? b.lhs / b.rhs : 0.0;
  r["invariants"]["potential_bound_ratio"] = invariant(ratio, 1.02, true, ratio <= 1.02);
  return r;
}

HolderEstimate holder_for(const Context& c) {
  HolderOptions opt;
  opt.seed = c.seeds.holder;
  return holder_quotient(potential_series(c.traj), c.traj.t_begin(), opt);
}

json holder(const Context& c) {
  const HolderEstimate est = holder_for(c);
  holder_table(est).write(c.out / "holder.csv");
  json r;
  r["values"] = {{"alpha", est.alpha}, {"constant", est.constant}, {"pairs", est.sample_count}};
  return r;
}

json weak_norm(const Context& c) {
  const double span = c.traj.t_end() - c.traj.t_begin();
  std::vector<double> eps;
  for (int k = 1; k <= 5; ++k) {
    const double e = std::ldexp(1.0, -k);
    if (e <= std::sqrt(span) / 2.0 && e <= c.traj.grid().length() / 4.0) eps.push_back(e);
  }
  if (eps.size() < 2) throw InsufficientData("weak_norm: the run is too short or the box too small for two scales");
  const double q = c.cfg.network.growth_exponent();
  const WeakNormScan scan = weak_norm_scan(c.traj, Point{}, c.traj.t_end(), eps, q);
  weak_norm_table(scan).write(c.out / "weak_norm.csv");
  const HolderEstimate est = holder_for(c);
  json r;
  r["values"] = {{"slope", scan.slope},
                 {"alpha", est.alpha},
                 {"exponent", weak_norm_exponent(est.alpha, q)},
                 {"critical_q", est.alpha > 0.0 ? critical_growth_exponent(est.alpha) : 2.0}};
  const bool zero_mass = std::all_of(scan.rows.begin(), scan.rows.end(), [](const WeakNormRow& w) { return w.sup_mass == 0.0; });
  r["invariants"]["weak_norm_slope_margin"] =
      invariant(scan.slope - (est.alpha - 0.2), 0.0, false, zero_mass || scan.slope >= est.alpha - 0.2, ">=");
  return r;
}

json fabes(const Context& c) {
  const FabesResult f = fabes_duality_check(c.traj);
  CsvTable t;
  t.columns = {"lhs", "rhs_factor", "ratio"};
  t.units = "lhs = ||M||_{L^{(N+1)/N}(Q_1)}; rhs_factor = sup_t int_{B_2} M; ratio = lhs / rhs_factor";
  t.add_row({f.lhs, f.rhs_factor, f.ratio});
  t.write(c.out / "fabes.csv");
  json r;
  r["values"] = {{"lhs", f.lhs}, {"rhs_factor", f.rhs_factor}, {"ratio", f.ratio}};
  r["invariants"]["fabes_ratio_finite"] = invariant(f.ratio, 0.0, true, std::isfinite(f.ratio), "finite");
  return r;
}

json abp(const Context& c) {
  const auto rows = abp_ensemble(c.traj.grid().dim(), c.cfg.abp_points, c.cfg.abp_members, c.seeds.abp,
                                 c.coeffs.lower, c.coeffs.upper);
  ensemble_table(rows, "sup_{Q_2} |u| / ||f||_{L^{N+1}(Q_2)}").write(c.out / "abp.csv");
  const double mx = ensemble_max(rows);
  json r;
  r["values"] = {{"empirical_constant", mx}, {"p95", ensemble_p95(rows)}, {"members", rows.size()}};
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const EnsembleRow& e) { return std::isfinite(e.ratio) && e.ratio > 0.0; });
  r["invariants"]["abp_ratio_finite"] = invariant(mx, 0.0, true, ok, "finite");
  return r;
}

json degiorgi_ladder(const Context& c) {
  const int dim = c.traj.grid().dim();
  const SmallnessReport rep = smallness_boundedness_test(c.traj, (dim + 1.0) / dim);
  ladder_table(rep.ladder).write(c.out / "ladder.csv");
  json r;
  r["values"] = {{"r", rep.r}, {"lr_norm", rep.lr_norm}, {"center_value", rep.center_value}, {"ladder", rep.ladder.values}};
  if (rep.ladder.fit) {
    const LadderFit& f = *rep.ladder.fit;
    r["values"]["fit"] = {{"skipped", f.skipped},       {"lambda", f.lambda},
                          {"gamma", f.gamma},           {"converges", f.converges},
                          {"favored_exponent", f.favored_exponent}};
  } else {
    r["values"]["fit_note"] = rep.ladder.fit_note;
  }
  r["invariants"]["center_value"] = invariant(rep.center_value, 1.0, false, rep.center_bounded);
  r["invariants"]["ladder_final"] = invariant(rep.ladder.values.back(), 1e-6, false, rep.ladder_small);
  return r;
}

json rescale(const Context& c) {
  const auto rows = rescale_study(c.traj, c.cfg.network, c.coeffs, Point{}, c.traj.t_end(), {1.0, 0.5, 0.25},
                                  c.cfg.network.growth_exponent());
  if (rows.empty()) throw InsufficientData("rescale_study: the trajectory covers none of the requested scales");
  CsvTable t;
  t.columns = {"eps", "source_residual", "rescaled_residual", "ratio", "predicted_ratio"};
  t.units = "L^2 norms of the discrete PDE residual; ratio = rescaled / source";
  double worst = 0.0;
  for (const auto& row : rows) {
    t.add_row({row.eps, row.source_residual, row.rescaled_residual, row.ratio, row.predicted_ratio});
    worst = std::max(worst, row.ratio);
  }
  t.write(c.out / "rescale.csv");
  json r;
  r["values"] = {{"max_ratio", worst}, {"scales", rows.size()}};
  r["invariants"]["rescale_residual_ratio"] = invariant(worst, 4.0, true, worst <= 4.0);
  return r;
}

json dispatch(Analysis a, const Context& c) {
  switch (a) {
    case Analysis::mass_check: return mass_check(c);
    case Analysis::entropy_check: return entropy_check(c);
    case Analysis::potential_bound: return potential_bound(c);
    case Analysis::holder: return holder(c);
    case Analysis::weak_norm: return weak_norm(c);
    case Analysis::fabes: return fabes(c);
    case Analysis::abp: return abp(c);
    case Analysis::degiorgi_ladder: return degiorgi_ladder(c);
    case Analysis::rescale_study: return rescale(c);
  }
  return {};
}

json run_one(Analysis a, const Context& c) {
  json r;
  try {
    r = dispatch(a, c);
    if (!r.contains("status")) r["status"] = "ok";
  } catch (const std::exception& e) {
    r = json::object();
    r["status"] = "error";
    r["message"] = e.what();
  }
  return r;
}

json config_echo(const ExperimentConfig& cfg) {
  json analyses = json::array();
  for (Analysis a : cfg.analyses) analyses.push_back(to_string(a));
  return {{"network", cfg.network_file ? cfg.network_file->string() : std::string("builtin:four_species")},
          {"grid", {{"dim", cfg.dim}, {"n", cfg.n}, {"length", cfg.length}}},
          {"diffusion", {{"d", cfg.d}, {"lower", cfg.lower}, {"upper", cfg.upper}}},
          {"scheme",
           {{"type", to_string(cfg.sim.scheme)},
            {"dt", cfg.sim.dt_init},
            {"t_end", cfg.sim.t_end},
            {"negativity_tolerance", cfg.sim.negativity_tolerance},
            {"max_rejects", cfg.sim.max_rejects},
            {"output_cadence", cfg.sim.output_cadence}}},
          {"analyses", analyses}};
}

RunResult finish(const ExperimentConfig& cfg, json summary, const Trajectory* traj) {
  if (traj && !traj->empty()) {
    const Context ctx{cfg, *traj, cfg.coeffs(), Seeds(cfg.seed), cfg.output};
    double min_value = kInfinity;
    for (const auto& s : traj->states()) min_value = std::min(min_value, s.min_value());
    for (const auto& rec : traj->step_log()) min_value = std::min(min_value, rec.min_value);
    summary["invariants"]["min_value"] =
        invariant(min_value, -cfg.sim.negativity_tolerance, true, min_value >= -cfg.sim.negativity_tolerance, ">=");

    std::vector<json> results(cfg.analyses.size());
    const std::size_t width = static_cast<std::size_t>(std::max(1, cfg.threads));
    for (std::size_t begin = 0; begin < cfg.analyses.size(); begin += width) {
      const std::size_t end = std::min(cfg.analyses.size(), begin + width);
      if (width == 1) {
        results[begin] = run_one(cfg.analyses[begin], ctx);
        continue;
      }
      std::vector<std::future<json>> batch;
      for (std::size_t k = begin; k < end; ++k)
        batch.push_back(std::async(std::launch::async, run_one, cfg.analyses[k], std::cref(ctx)));
      for (std::size_t k = begin; k < end; ++k) results[k] = batch[k - begin].get();
    }
    for (std::size_t k = 0; k < cfg.analyses.size(); ++k) {
      const std::string name = to_string(cfg.analyses[k]);
      json& r = results[k];
      summary["invariants"][name + "_completed"] =
          invariant(r["status"] == "error" ? 0.0 : 1.0, 1.0, true, r["status"] != "error", "==");
      if (r.contains("invariants")) {
        for (auto& [key, inv] : r["invariants"].items()) summary["invariants"][key] = inv;
        r.erase("invariants");
      }
      summary["analyses"][name] = r;
    }
  }
  RunResult out;
  out.output_dir = cfg.output;
  if (summary.contains("invariants"))
    for (const auto& [key, inv] : summary["invariants"].items())
      if (inv["hard"].get<bool>() && !inv["pass"].get<bool>()) out.failed_invariants.push_back(key);
  out.exit_status = out.failed_invariants.empty() ? 0 : 1;
  summary["hard_failures"] = out.failed_invariants;
  summary["exit_status"] = out.exit_status;
  out.summary_json = summary.dump(2) + "\n";
  std::ofstream(cfg.output / "summary.json") << out.summary_json;
  return out;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.output);
  const Seeds seeds(cfg.seed);
  json summary;
  summary["seed"] = cfg.seed;
  summary["threads"] = cfg.threads;
  summary["config"] = config_echo(cfg);

  const HypothesisReport hyp = check_hypotheses(cfg.network, 2000, seeds.hypotheses);
  summary["network"] = {{"accepted", hyp.accepted()},
                        {"h2_worst", hyp.h2_worst},
                        {"h3_worst", hyp.h3_worst},
                        {"h4_worst", hyp.h4_worst},
                        {"notes", hyp.notes}};
  summary["invariants"]["network_hypotheses"] =
      invariant(hyp.accepted() ? 1.0 : 0.0, 1.0, true, hyp.accepted(), "==");

  Trajectory traj;
  bool completed = false;
  try {
    traj = simulate(initial_state(cfg, seeds.initial), cfg.network, cfg.coeffs(), cfg.sim);
    completed = true;
    summary["simulation"] = {{"status", "ok"}};
  } catch (const SimulationFailure& e) {
    traj = e.partial();
    summary["simulation"] = {{"status", "failed"}, {"message", e.what()}};
  } catch (const Error& e) {
    summary["simulation"] = {{"status", "failed"}, {"message", e.what()}};
  }
  summary["invariants"]["simulation_completed"] =
      invariant(completed ? 1.0 : 0.0, 1.0, true, completed, "==");
  if (!traj.empty()) {
    write_trajectory(cfg.output, traj);
    summary["simulation"]["frames"] = traj.states().size();
    summary["simulation"]["steps"] = traj.step_log().size();
    summary["simulation"]["t_end"] = traj.t_end();
  }
  return finish(cfg, std::move(summary), completed ? &traj : nullptr);
}

RunResult analyze_trajectory(const ExperimentConfig& cfg, const Trajectory& traj) {
  if (traj.empty()) throw InsufficientData("analyze_trajectory: empty trajectory");
  fs::create_directories(cfg.output);
  json summary;
  summary["seed"] = cfg.seed;
  summary["threads"] = cfg.threads;
  summary["config"] = config_echo(cfg);
  summary["simulation"] = {{"status", "loaded"}, {"frames", traj.states().size()}, {"t_end", traj.t_end()}};
  return finish(cfg, std::move(summary), &traj);
}

}  // namespace erds
