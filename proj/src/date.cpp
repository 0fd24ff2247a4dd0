#include "parity/date.hpp"

#include "parity/error.hpp"
#include "text.hpp"

#include <charconv>
#include <fmt/format.h>

namespace parity {
namespace {

int parse_component(std::string_view s, std::string_view whole) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("invalid date '" + std::string(whole) + "'");
    }
    return value;
}

Date make_date(int y, int m, int d, std::string_view whole) {
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (m < 1 || d < 1 || !date.ok()) {
        throw ParseError("invalid date '" + std::string(whole) + "'");
    }
    return date;
}

}  // namespace

Date parse_iso_date(std::string_view text) {
    const auto s = text::trim(text);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
        throw ParseError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    return make_date(parse_component(s.substr(0, 4), text), parse_component(s.substr(5, 2), text),
                     parse_component(s.substr(8, 2), text), text);
}

Date parse_us_date(std::string_view text) {
    const auto s = text::trim(text);
    const auto first = s.find('/');
    const auto second = s.find('/', first == std::string_view::npos ? 0 : first + 1);
    if (first == std::string_view::npos || second == std::string_view::npos) {
        throw ParseError("invalid date '" + std::string(text) + "', expected MM/DD/YYYY");
    }
    const int month = parse_component(s.substr(0, first), text);
    const int day = parse_component(s.substr(first + 1, second - first - 1), text);
    const int year = parse_component(s.substr(second + 1), text);
    return make_date(year, month, day, text);
}

std::string format_iso_date(const Date& date) {
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(date.year()),
                       static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

std::string format_us_date(const Date& date) {
    return fmt::format("{:02d}/{:02d}/{:04d}", static_cast<unsigned>(date.month()),
                       static_cast<unsigned>(date.day()), static_cast<int>(date.year()));
}

}  // namespace parity
