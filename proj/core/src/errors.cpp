#include "erds/errors.hpp"

namespace erds {

CoverageError::CoverageError(double missing_begin, double missing_end, const std::string& what)
    : Error(what + ": trajectory does not cover [" + std::to_string(missing_begin) + ", " +
            std::to_string(missing_end) + "]"),
      missing_begin_(missing_begin),
      missing_end_(missing_end) {}

}  // namespace erds

namespace erds {

namespace {
std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string s;
  for (const auto& d : diags) {
    if (!s.empty()) s += "\n";
    if (d.line > 0) s += "line " + std::to_string(d.line) + ": ";
    s += d.message;
  }
  return s;
}
}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace erds
