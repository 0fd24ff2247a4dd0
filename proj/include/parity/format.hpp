#pragma once

#include <string>

namespace parity {

/// Report formatting: 10 significant digits, stable across runs.
std::string format_number(double value);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_exact(double value);

/// `value` rounded to 10 significant digits (for JSON emission).
double round_significant(double value);

}  // namespace parity
