#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace parity::text {

std::string_view trim(std::string_view s);

/// Splits one CSV line on commas. Double-quoted fields may contain commas.
std::vector<std::string> split_csv(std::string_view line);

/// Strict numeric parsing: the whole (trimmed) field must be consumed.
double parse_double(std::string_view field, std::string_view what);
std::int64_t parse_int(std::string_view field, std::string_view what);

std::string to_lower(std::string_view s);

}  // namespace parity::text
