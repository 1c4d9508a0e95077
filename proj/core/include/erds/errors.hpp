#pragma once

#include <stdexcept>
#include <string>

namespace erds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A trajectory does not cover the time window an analysis needs.
class CoverageError : public Error {
 public:
  CoverageError(double missing_begin, double missing_end, const std::string& what);

  double missing_begin() const noexcept { return missing_begin_; }
  double missing_end() const noexcept { return missing_end_; }

 private:
  double missing_begin_;
  double missing_end_;
};

class UnsupportedDimension : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// A ratio whose denominator vanishes identically (e.g. f == 0 in abp_ratio).
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

}  // namespace erds

#include <vector>

namespace erds {

/// One problem found while parsing a text input.
struct Diagnostic {
  int line = 0;  ///< 1-based; 0 when not tied to a line
  std::string message;
};

/// Parsing failed; carries every problem found, not just the first.
class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace erds
