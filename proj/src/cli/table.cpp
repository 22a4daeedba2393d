#include "oscent/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "oscent/error.hpp"

namespace oscent::cli {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidArgument("row width does not match the table header");
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

namespace {

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

}  // namespace

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << quote_field(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << quote_field(cell_text(row[c]));
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  auto records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto& name = table.columns[c];
      if (const auto* d = std::get_if<double>(&row[c])) {
        if (std::isfinite(*d)) {
          record[name] = std::strtod(format_number(*d).c_str(), nullptr);
        } else {
          record[name] = nullptr;
        }
      } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        record[name] = *i;
      } else {
        record[name] = std::get<std::string>(row[c]);
      }
    }
    records.push_back(std::move(record));
  }
  out << records.dump(2) << '\n';
}

}  // namespace oscent::cli
