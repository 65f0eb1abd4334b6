#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace infotweet {

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

std::string to_lower_ascii(std::string_view s);

// Shortest decimal that parses back to the same double.
std::string format_shortest(double value);
// printf-style %.<digits>g.
std::string format_significant(double value, int digits);
// printf-style %.<decimals>f.
std::string format_fixed(double value, int decimals);

// Strict parsers: the whole (trimmed) token must be consumed.
bool parse_double(std::string_view token, double& out);
bool parse_uint64(std::string_view token, std::uint64_t& out);

}  // namespace infotweet
