#pragma once

#include <string>
#include <string_view>

namespace ipa {

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double value);

/// Parses a full-string decimal number; throws ParseError naming `what` otherwise.
double parse_double(std::string_view text, const std::string& what);

/// Trims ASCII whitespace (including a trailing CR) from both ends.
std::string_view trim(std::string_view text);

}  // namespace ipa
