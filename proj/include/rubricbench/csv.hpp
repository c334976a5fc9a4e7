#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rubricbench::csv {

using Row = std::vector<std::string>;

// RFC 4180 quoting: fields with a comma, quote, or line break are quoted.
std::string escape(std::string_view field);
std::string write_row(const Row& row);
std::string write(const std::vector<Row>& rows);

// Parses quoted fields with embedded newlines; accepts CRLF or LF endings.
// Throws ValidationError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

}  // namespace rubricbench::csv
