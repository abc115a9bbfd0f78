#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bitune {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Strict full-string parse; throws a parse error naming `what`.
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// Splits on `sep`, trimming blanks around each field.
std::vector<std::string> split_fields(std::string_view text, char sep);

}  // namespace bitune
