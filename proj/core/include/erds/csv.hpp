#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace erds {

/// Numeric table written as CSV: an optional "# units: ..." line, a header
/// row, then rows printed with round-trip precision.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string units;

  void add_row(std::vector<double> row);
  std::string to_string() const;
  void write(const std::filesystem::path& path) const;
};

/// Reads a table written by CsvTable::write ('#' lines are skipped).
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace erds
