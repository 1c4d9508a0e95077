#include "erds/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "erds/errors.hpp"

namespace erds {

namespace {

const std::vector<std::pair<Analysis, const char*>> kAnalysisNames = {
    {Analysis::mass_check, "mass_check"},
    {Analysis::entropy_check, "entropy_check"},
    {Analysis::potential_bound, "potential_bound"},
    {Analysis::holder, "holder"},
    {Analysis::weak_norm, "weak_norm"},
    {Analysis::fabes, "fabes"},
    {Analysis::abp, "abp"},
    {Analysis::degiorgi_ladder, "degiorgi_ladder"},
    {Analysis::rescale_study, "rescale_study"},
};

const std::map<std::string, std::set<std::string>> kKeys = {
    {"network", {"file"}},
    {"grid", {"dim", "n", "length"}},
    {"diffusion", {"d", "lower", "upper"}},
    {"scheme",
     {"type", "dt", "t_end", "negativity_tolerance", "max_rejects", "output_cadence", "track_dissipation"}},
    {"initial", {"kind", "background", "amplitude", "sigma", "bumps", "value"}},
    {"run", {"seed", "analyses", "output", "threads", "abp_members", "abp_points"}},
};

const std::vector<std::string> kRequired = {"grid.dim", "grid.n", "grid.length", "diffusion.d", "scheme.t_end"};

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(const std::map<std::string, Entry>& entries, std::vector<Diagnostic>& diags)
      : entries_(entries), diags_(diags) {}

  const Entry* find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }
  int line(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

  std::optional<double> number(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    try {
      std::size_t used = 0;
      const double v = std::stod(e->value, &used);
      if (used == e->value.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    diags_.push_back({e->line, key + ": expected a number, got '" + e->value + "'"});
    return std::nullopt;
  }

  std::optional<long long> integer(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec == std::errc() && ptr == e->value.data() + e->value.size()) return v;
    diags_.push_back({e->line, key + ": expected an integer, got '" + e->value + "'"});
    return std::nullopt;
  }

  std::optional<bool> boolean(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
    if (e->value == "false" || e->value == "0" || e->value == "no") return false;
    diags_.push_back({e->line, key + ": expected true or false, got '" + e->value + "'"});
    return std::nullopt;
  }

  void error(const std::string& key, const std::string& message) { diags_.push_back({line(key), message}); }

 private:
  const std::map<std::string, Entry>& entries_;
  std::vector<Diagnostic>& diags_;
};

}  // namespace

std::string to_string(Analysis a) {
  for (const auto& [v, name] : kAnalysisNames)
    if (v == a) return name;
  return "unknown";
}

std::optional<Analysis> parse_analysis(std::string_view name) {
  for (const auto& [v, n] : kAnalysisNames)
    if (name == n) return v;
  return std::nullopt;
}

const std::vector<Analysis>& all_analyses() {
  static const std::vector<Analysis> all = [] {
    std::vector<Analysis> v;
    for (const auto& [a, name] : kAnalysisNames) v.push_back(a);
    return v;
  }();
  return all;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<Diagnostic> diags;
  std::map<std::string, Entry> entries;
  std::string section;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find_first_of("#;"); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        diags.push_back({line_no, "malformed section header '" + line + "'"});
        continue;
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!kKeys.count(section)) diags.push_back({line_no, "unknown section [" + section + "]"});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      diags.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) {
      diags.push_back({line_no, "key '" + key + "' appears before any section"});
      continue;
    }
    auto sec = kKeys.find(section);
    if (sec == kKeys.end()) continue;  // already reported
    if (!sec->second.count(key)) {
      diags.push_back({line_no, "unknown key '" + key + "' in [" + section + "]"});
      continue;
    }
    const std::string full = section + "." + key;
    if (auto it = entries.find(full); it != entries.end()) {
      diags.push_back({line_no, "duplicate key '" + full + "' on lines " + std::to_string(it->second.line) + " and " +
                                    std::to_string(line_no)});
      continue;
    }
    entries[full] = {value, line_no};
  }
  for (const auto& key : kRequired)
    if (!entries.count(key)) diags.push_back({0, "missing required key '" + key + "'"});

  ExperimentConfig cfg;
  Reader r(entries, diags);

  if (const Entry* e = r.find("network.file")) {
    std::filesystem::path p = e->value;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.network_file = p;
    if (!std::filesystem::exists(p)) {
      diags.push_back({e->line, "network file '" + p.string() + "' does not exist"});
    } else {
      try {
        cfg.network = load_network_file(p.string());
      } catch (const ParseError& err) {
        for (const auto& d : err.diagnostics())
          diags.push_back({e->line, p.filename().string() + ":" + std::to_string(d.line) + ": " + d.message});
      } catch (const Error& err) {
        diags.push_back({e->line, err.what()});
      }
    }
  }

  if (auto v = r.integer("grid.dim")) {
    if (*v < 1 || *v > 3) r.error("grid.dim", "grid.dim must be 1, 2 or 3");
    else cfg.dim = static_cast<int>(*v);
  }
  if (auto v = r.integer("grid.n")) {
    if (*v < 8 || (*v & (*v - 1)) != 0) r.error("grid.n", "grid.n must be a power of two >= 8");
    else cfg.n = static_cast<int>(*v);
  }
  if (auto v = r.number("grid.length")) {
    if (!(*v > 0.0)) r.error("grid.length", "grid.length must be positive");
    else cfg.length = *v;
  }

  if (const Entry* e = r.find("diffusion.d")) {
    for (const auto& item : split_list(e->value)) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        cfg.d.push_back(v);
      } catch (const std::exception&) {
        diags.push_back({e->line, "diffusion.d: '" + item + "' is not a number"});
      }
    }
    if (cfg.d.empty()) diags.push_back({e->line, "diffusion.d must list one coefficient per species"});
    else if (static_cast<int>(cfg.d.size()) != cfg.network.species_count())
      diags.push_back({e->line, "diffusion.d lists " + std::to_string(cfg.d.size()) + " coefficients but the network has " +
                                    std::to_string(cfg.network.species_count()) + " species"});
  }
  const auto lower = r.number("diffusion.lower");
  const auto upper = r.number("diffusion.upper");
  if (!cfg.d.empty()) {
    cfg.lower = lower.value_or(*std::min_element(cfg.d.begin(), cfg.d.end()));
    cfg.upper = upper.value_or(*std::max_element(cfg.d.begin(), cfg.d.end()));
    if (!(cfg.lower > 0.0)) r.error(lower ? "diffusion.lower" : "diffusion.d", "the lower diffusion bound must be positive");
    if (cfg.lower > cfg.upper) r.error("diffusion.upper", "diffusion.upper is below diffusion.lower");
    for (std::size_t i = 0; i < cfg.d.size(); ++i) {
      const std::string name = "d_" + std::to_string(i + 1);
      if (cfg.d[i] < cfg.lower)
        r.error("diffusion.d", "bound violation: " + name + " = " + format_number(cfg.d[i]) +
                                   " is below the declared lower bound");
      if (cfg.d[i] > cfg.upper)
        r.error("diffusion.d", "bound violation: " + name + " = " + format_number(cfg.d[i]) +
                                   " exceeds the declared upper bound");
    }
  }

  if (const Entry* e = r.find("scheme.type")) {
    try {
      cfg.sim.scheme = parse_scheme(e->value);
    } catch (const Error& err) {
      diags.push_back({e->line, err.what()});
    }
  }
  if (auto v = r.number("scheme.dt")) {
    if (!(*v > 0.0)) r.error("scheme.dt", "scheme.dt must be positive");
    else cfg.sim.dt_init = *v;
  }
  if (auto v = r.number("scheme.t_end")) {
    if (!(*v > 0.0)) r.error("scheme.t_end", "scheme.t_end must be positive");
    else cfg.sim.t_end = *v;
  }
  if (auto v = r.number("scheme.negativity_tolerance")) {
    if (!(*v >= 0.0)) r.error("scheme.negativity_tolerance", "negativity_tolerance must be nonnegative");
    else cfg.sim.negativity_tolerance = *v;
  }
  if (auto v = r.integer("scheme.max_rejects")) {
    if (*v < 0 || *v > 30) r.error("scheme.max_rejects", "max_rejects must lie in [0, 30]");
    else cfg.sim.max_rejects = static_cast<int>(*v);
  }
  if (auto v = r.integer("scheme.output_cadence")) {
    if (*v < 1) r.error("scheme.output_cadence", "output_cadence must be positive");
    else cfg.sim.output_cadence = static_cast<int>(*v);
  }
  if (auto v = r.boolean("scheme.track_dissipation")) cfg.sim.track_dissipation = *v;

  if (const Entry* e = r.find("initial.kind")) {
    if (e->value != "bumps" && e->value != "uniform")
      diags.push_back({e->line, "initial.kind must be 'bumps' or 'uniform'"});
    else cfg.initial.kind = e->value;
  }
  for (auto [key, target] : {std::pair{"initial.background", &cfg.initial.background},
                             std::pair{"initial.amplitude", &cfg.initial.amplitude},
                             std::pair{"initial.sigma", &cfg.initial.sigma}, std::pair{"initial.value", &cfg.initial.value}}) {
    if (auto v = r.number(key)) {
      if (*v < 0.0) r.error(key, std::string(key) + " must be nonnegative");
      else *target = *v;
    }
  }
  if (cfg.initial.sigma <= 0.0) r.error("initial.sigma", "initial.sigma must be positive");
  if (auto v = r.integer("initial.bumps")) {
    if (*v < 0) r.error("initial.bumps", "initial.bumps must be nonnegative");
    else cfg.initial.bumps = static_cast<int>(*v);
  }

  if (auto v = r.integer("run.seed")) {
    if (*v < 0) r.error("run.seed", "run.seed must be nonnegative");
    else cfg.seed = static_cast<std::uint64_t>(*v);
  }
  if (const Entry* e = r.find("run.analyses")) {
    for (const auto& item : split_list(e->value)) {
      if (item == "all") {
        cfg.analyses = all_analyses();
        continue;
      }
      auto a = parse_analysis(item);
      if (!a) diags.push_back({e->line, "unknown analysis '" + item + "'"});
      else if (std::find(cfg.analyses.begin(), cfg.analyses.end(), *a) == cfg.analyses.end()) cfg.analyses.push_back(*a);
    }
  }
  if (const Entry* e = r.find("run.output")) {
    std::filesystem::path p = e->value;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    cfg.output = p;
  }
  if (auto v = r.integer("run.threads")) {
    if (*v < 1) r.error("run.threads", "run.threads must be positive");
    else cfg.threads = static_cast<int>(*v);
  }
  if (auto v = r.integer("run.abp_members")) {
    if (*v < 1) r.error("run.abp_members", "run.abp_members must be positive");
    else cfg.abp_members = static_cast<int>(*v);
  }
  if (auto v = r.integer("run.abp_points")) {
    if (*v < 4) r.error("run.abp_points", "run.abp_points must be at least 4");
    else cfg.abp_points = static_cast<int>(*v);
  }

  if (cfg.sim.scheme == Scheme::explicit_fd && !cfg.d.empty() && diags.empty()) {
    const double h = cfg.length / cfg.n;
    if (cfg.sim.dt_init > h * h / (2.0 * cfg.dim * cfg.upper))
      r.error("scheme.dt", "scheme.dt exceeds the explicit stability bound h^2 / (2 N upper)");
  }

  if (!diags.empty()) {
    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    throw ParseError(std::move(diags));
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace erds
