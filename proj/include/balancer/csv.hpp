#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace balancer::csv {

/// Splits one CSV line. Fields may be double-quoted ("" escapes a quote).
std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Reads all lines, dropping a UTF-8 BOM and trailing '\r'.
std::vector<std::string> read_lines(std::istream &in);

std::string trim(std::string_view s);

}  // namespace balancer::csv
