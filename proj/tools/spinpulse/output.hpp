#pragma once

// Tabular results with a provenance header, written as CSV or JSON lines.

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"

namespace spinpulse::cli {

using Cell = std::variant<double, long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Written after the rows: trailing comments in CSV, one record in JSON lines.
  std::vector<std::pair<std::string, Cell>> summary;

  void add_row(std::vector<Cell> row);
};

/// 17 significant digits; non-finite values as nan / inf / -inf.
std::string format_double(double v);

/// Header: library version, experiment and the resolved config on one line
/// each, all '#'-prefixed.
void write_header(std::ostream& out, const ExperimentConfig& cfg);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

}  // namespace spinpulse::cli
