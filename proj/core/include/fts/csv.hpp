#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fts::csv {

/// Split one line on commas. No quoting: none of the toolkit's formats
/// embed commas in fields. A trailing '\r' is stripped first.
std::vector<std::string_view> split(std::string_view line);

/// Parse a double with std::from_chars. Throws ParseError (message includes
/// `context`) on trailing garbage, overflow, or an empty field. Non-finite
/// values ("nan", "inf") parse successfully; callers that require finite
/// values must check.
double parse_double(std::string_view field, const std::string& context);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

}  // namespace fts::csv
