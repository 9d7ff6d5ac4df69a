#pragma once

#include <stdexcept>
#include <string>

namespace fsp {

/// Base for every domain failure raised by the library (exit code 1 in the CLI).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside the documented range of an operation.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Arguments are individually well-formed but violate an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed input text. `line` is 1-based, 0 when the input is not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A colored poset failed validation; the message names the violated invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace fsp
