#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cvqkd {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, bool, std::string>;

// Row-major result table shared by the CSV and JSON writers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

// 12 significant digits, shortest form, '.' separator regardless of locale.
std::string format_number(double x);
// x rounded to what format_number prints.
double round_significant(double x);

// Header row, comma delimiter, LF endings. Strings must not contain ',' or
// line breaks (callers sanitise with csv_safe).
std::string to_csv(const Table& table);
Table parse_csv(std::string_view text);
std::string csv_safe(std::string_view s);

Json cell_to_json(const Cell& cell);
Json rows_to_json(const Table& table);

// {"config": ..., "results": [...]} plus optional "summary" / "error" keys.
struct Document {
  Json config = Json::object();
  Table results;
  Json summary;  // null when absent
  std::optional<std::pair<std::string, std::string>> error;  // kind, message
};

std::string to_json_text(const Document& doc);
// Two-space indented JSON; floats printed with format_number.
std::string dump_json(const Json& j);
std::string to_csv_text(const Document& doc);

}  // namespace cvqkd
