#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tcprio {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

/// Splits on `delimiter`, keeping empty fields. A trailing '\r' is dropped.
std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

/// Strips surrounding whitespace and double quotes.
std::string_view trim(std::string_view text);

}  // namespace tcprio
