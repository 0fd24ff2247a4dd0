#pragma once

#include <stdexcept>
#include <string>

namespace parity {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (dates, numbers, CSV headers).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input violates an operation's precondition or yields no usable data.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace parity
