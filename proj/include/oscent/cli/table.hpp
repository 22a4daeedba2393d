#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace oscent::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-labelled rows. Column names carry their unit, e.g. "E [u_E]".
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// 12 significant digits; non-finite values print as nan, inf or -inf.
std::string format_number(double value);

/// Header row plus one line per row, fields quoted when they contain a
/// comma, quote or line break.
void write_csv(const Table& table, std::ostream& out);

/// Array of records keyed by column name, numbers rounded to 12 significant
/// digits, non-finite numbers as null.
void write_json(const Table& table, std::ostream& out);

}  // namespace oscent::cli
