#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vote_diffuse::text {

/// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view token);
std::optional<std::uint64_t> parse_u64(std::string_view token);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::vector<std::string_view> split_whitespace(std::string_view s);

}  // namespace vote_diffuse::text
