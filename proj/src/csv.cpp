#include "rubricbench/csv.hpp"

#include "rubricbench/error.hpp"

namespace rubricbench::csv {

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string write_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += escape(row[i]);
  }
  return out + "\r\n";
}

std::string write(const std::vector<Row>& rows) {
  std::string out;
  for (const auto& r : rows) out += write_row(r);
  return out;
}

std::vector<Row> parse(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  std::size_t line = 1;
  std::size_t quote_line = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        quote_line = line;
        row_open = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_open = true;
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        if (row_open || !field.empty()) {
          row.push_back(std::move(field));
          field.clear();
          rows.push_back(std::move(row));
          row.clear();
        }
        row_open = false;
        break;
      default:
        field += c;
        row_open = true;
    }
  }
  if (quoted) throw ValidationError("CSV quote opened on line " + std::to_string(quote_line) + " is never closed");
  if (row_open || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace rubricbench::csv
