#include "ipa/format.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <system_error>

#include "ipa/error.hpp"

namespace ipa {

std::string format_double(double value) {
    if (value == 0.0) return "0";  // also folds -0
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("cannot format number");
    return {buf, end};
}

double parse_double(std::string_view text, const std::string& what) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value))
        throw ParseError("invalid number '" + std::string(text) + "' in " + what);
    return value;
}

std::string_view trim(std::string_view text) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = text.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(ws);
    return text.substr(first, last - first + 1);
}

}  // namespace ipa
