#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "erds/errors.hpp"
#include "erds/kinetics.hpp"

namespace erds {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<int> to_int(std::string_view s) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "2 A1" or "A3" -> (species index 1-based, coefficient)
std::optional<std::pair<int, int>> parse_term(std::string_view term) {
  term = trim(term);
  std::size_t pos = term.find('A');
  if (pos == std::string_view::npos) return std::nullopt;
  int coef = 1;
  if (pos > 0) {
    auto c = to_int(term.substr(0, pos));
    if (!c || *c < 1) return std::nullopt;
    coef = *c;
  }
  auto idx = to_int(term.substr(pos + 1));
  if (!idx || *idx < 1) return std::nullopt;
  return std::make_pair(*idx, coef);
}

std::optional<std::vector<std::pair<int, int>>> parse_side(std::string_view side) {
  side = trim(side);
  std::vector<std::pair<int, int>> terms;
  if (side == "0") return terms;
  std::size_t start = 0;
  while (start <= side.size()) {
    const std::size_t plus = side.find('+', start);
    const auto piece = side.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start);
    auto t = parse_term(piece);
    if (!t) return std::nullopt;
    terms.push_back(*t);
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return terms;
}

struct RawReaction {
  int line;
  double rate;
  std::vector<std::pair<int, int>> lhs, rhs;
};

}  // namespace

ReactionNetwork parse_network(std::string_view text) {
  std::vector<Diagnostic> diags;
  std::vector<RawReaction> raw;
  std::optional<int> declared_species;
  std::optional<double> declared_q, declared_growth;

  std::istringstream in{std::string(text)};
  std::string line_buf;
  int line_no = 0;
  while (std::getline(in, line_buf)) {
    ++line_no;
    std::string_view line = line_buf;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) {
      // Directive: key = value
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        diags.push_back({line_no, "expected a reaction 'k: lhs -> rhs' or a directive 'key = value'"});
        continue;
      }
      const auto key = trim(line.substr(0, eq));
      const auto value = line.substr(eq + 1);
      if (key == "species") {
        auto v = to_int(value);
        if (!v || *v < 1) diags.push_back({line_no, "species must be a positive integer"});
        else declared_species = *v;
      } else if (key == "q") {
        auto v = to_double(value);
        if (!v || *v < 1.0) diags.push_back({line_no, "q must be a number >= 1"});
        else declared_q = *v;
      } else if (key == "growth") {
        auto v = to_double(value);
        if (!v || *v <= 0.0) diags.push_back({line_no, "growth must be positive"});
        else declared_growth = *v;
      } else {
        diags.push_back({line_no, "unknown directive '" + std::string(key) + "'"});
      }
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon > arrow) {
      diags.push_back({line_no, "reaction line must start with 'k:'"});
      continue;
    }
    auto rate = to_double(line.substr(0, colon));
    if (!rate || !(*rate > 0.0)) {
      diags.push_back({line_no, "rate constant must be a positive number"});
      continue;
    }
    std::string_view lhs_text = line.substr(colon + 1, arrow - colon - 1);
    if (!lhs_text.empty() && lhs_text.back() == '<') lhs_text.remove_suffix(1);
    auto lhs = parse_side(lhs_text);
    auto rhs = parse_side(line.substr(arrow + 2));
    if (!lhs || !rhs) {
      diags.push_back({line_no, "malformed stoichiometry (terms look like '2 A1 + A3')"});
      continue;
    }
    int lo = 0, ro = 0;
    for (auto [i, c] : *lhs) lo += c;
    for (auto [i, c] : *rhs) ro += c;
    if (lo != ro) {
      diags.push_back({line_no, "unbalanced reaction: " + std::to_string(lo) + " molecules -> " + std::to_string(ro)});
      continue;
    }
    raw.push_back({line_no, *rate, *lhs, *rhs});
  }

  int species = declared_species.value_or(0);
  for (const auto& r : raw)
    for (const auto* side : {&r.lhs, &r.rhs})
      for (auto [i, c] : *side) {
        if (declared_species && i > *declared_species)
          diags.push_back({r.line, "species A" + std::to_string(i) + " exceeds declared species count"});
        species = std::max(species, i);
      }
  if (species < 1) diags.push_back({0, "network declares no species"});
  if (!diags.empty()) throw ParseError(std::move(diags));

  std::vector<Reaction> reactions;
  int max_order = 0;
  for (const auto& r : raw) {
    Reaction rx;
    rx.reactants.assign(static_cast<std::size_t>(species), 0);
    rx.products.assign(static_cast<std::size_t>(species), 0);
    for (auto [i, c] : r.lhs) rx.reactants[static_cast<std::size_t>(i - 1)] += c;
    for (auto [i, c] : r.rhs) rx.products[static_cast<std::size_t>(i - 1)] += c;
    rx.forward_rate = rx.backward_rate = r.rate;
    max_order = std::max({max_order, rx.reactant_order(), rx.product_order()});
    reactions.push_back(std::move(rx));
  }
  const double q = declared_q.value_or(std::max(2.0, static_cast<double>(max_order)));
  if (q + 1e-12 < max_order)
    throw ParseError({{0, "declared q is below the highest reaction order " + std::to_string(max_order)}});
  return ReactionNetwork(species, std::move(reactions), q, declared_growth.value_or(1.0));
}

ReactionNetwork load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

}  // namespace erds
