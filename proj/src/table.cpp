#include "cvqkd/table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace cvqkd {
namespace {

std::string format_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return std::get<std::string>(cell);
}

Cell parse_cell(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return value;
  return std::string(text);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void dump_value(const Json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        dump_value(value, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump_value(j[i], depth + 1, out);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double d = j.get<double>();
      out += std::isfinite(d) ? format_number(d) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("row width does not match the header");
  }
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

double round_significant(double x) {
  const std::string s = format_number(x);
  double value = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), value);
  return value;
}

std::string csv_safe(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(std::string_view text) {
  Table table;
  bool header = true;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    const auto fields = split(line, ',');
    if (header) {
      for (auto f : fields) table.columns.emplace_back(f);
      header = false;
      continue;
    }
    std::vector<Cell> row;
    for (auto f : fields) row.push_back(parse_cell(f));
    table.add_row(std::move(row));
  }
  return table;
}

Json cell_to_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return round_significant(*d);
  }
  if (const auto* b = std::get_if<bool>(&cell)) return *b;
  return std::get<std::string>(cell);
}

Json rows_to_json(const Table& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[table.columns[i]] = cell_to_json(row[i]);
    }
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string to_json_text(const Document& doc) {
  Json root = Json::object();
  root["config"] = doc.config;
  root["results"] = rows_to_json(doc.results);
  if (!doc.summary.is_null()) root["summary"] = doc.summary;
  if (doc.error) {
    root["error"] = Json{{"kind", doc.error->first}, {"message", doc.error->second}};
  }
  return dump_json(root);
}

std::string dump_json(const Json& j) {
  std::string out;
  dump_value(j, 0, out);
  out += '\n';
  return out;
}

std::string to_csv_text(const Document& doc) {
  if (doc.error) {
    Table t;
    t.columns = {"status", "message"};
    t.add_row({csv_safe(doc.error->first), csv_safe(doc.error->second)});
    return to_csv(t);
  }
  return to_csv(doc.results);
}

}  // namespace cvqkd
