#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pacb::app {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// Quotes a field only when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

std::string csv_line(const std::vector<std::string>& fields);

/// Minimal RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace pacb::app
