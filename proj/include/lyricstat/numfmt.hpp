#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace lyricstat {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Empty string for an absent value.
std::string format_optional(const std::optional<double>& value);

/// Fixed-point with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Locale-independent strict parse of the whole of `text`.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

}  // namespace lyricstat
