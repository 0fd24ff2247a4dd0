#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace parity {

/// Calendar date with day resolution.
using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws ParseError on malformed or impossible dates.
Date parse_iso_date(std::string_view text);

/// Parses `MM/DD/YYYY` as used by the US Treasury downloads.
Date parse_us_date(std::string_view text);

std::string format_iso_date(const Date& date);
std::string format_us_date(const Date& date);

/// Signed calendar-day difference `to - from`.
inline long days_between(const Date& from, const Date& to) {
    return static_cast<long>(
        (std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

inline Date add_days(const Date& date, long days) {
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

constexpr double kDaysPerYear = 365.0;

/// ACT/365 year fraction between two dates.
inline double year_fraction(const Date& from, const Date& to) {
    return static_cast<double>(days_between(from, to)) / kDaysPerYear;
}

}  // namespace parity
