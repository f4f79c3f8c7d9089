#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace spinpulse::cli {
namespace {

using ordered = nlohmann::ordered_json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return csv_field(v);
        }
      },
      c);
}

ordered json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> ordered {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? ordered(v) : ordered(nullptr);
        } else {
          return ordered(v);
        }
      },
      c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row has " + std::to_string(row.size()) + " cells for " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# spinpulse " << SPINPULSE_VERSION_STRING << '\n';
  out << "# experiment: " << to_string(cfg.experiment) << '\n';
  out << "# config: " << cfg.resolved().dump() << '\n';
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "," : "") << csv_field(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << '\n';
    }
    for (const auto& [key, value] : table.summary) out << "# " << key << " = " << csv_cell(value) << '\n';
    return;
  }
  for (const auto& row : table.rows) {
    ordered record = ordered::object();
    for (std::size_t i = 0; i < row.size(); ++i) record[table.columns[i]] = json_cell(row[i]);
    out << record.dump() << '\n';
  }
  if (!table.summary.empty()) {
    ordered summary = ordered::object();
    for (const auto& [key, value] : table.summary) summary[key] = json_cell(value);
    out << ordered{{"summary", summary}}.dump() << '\n';
  }
}

}  // namespace spinpulse::cli
