#pragma once

#include <string>
#include <string_view>

namespace lswarm {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

/// Parses a full string as a double; throws FormatError on trailing junk.
double parse_double(std::string_view text);

long long parse_int(std::string_view text);

std::string_view trim(std::string_view s);

} // namespace lswarm
