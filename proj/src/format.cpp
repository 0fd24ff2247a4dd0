#include "parity/format.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fmt/format.h>

namespace parity {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // also folds -0
    return fmt::format("{:.10g}", value);
}

std::string format_exact(double value) {
    if (value == 0.0) return "0";
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

double round_significant(double value) {
    const auto text = format_number(value);
    return std::strtod(text.c_str(), nullptr);
}

}  // namespace parity
