#pragma once

#include <stdexcept>
#include <string>

namespace bgi {

// Bad user input: malformed files, inconsistent lengths, invalid geometry.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public InputError {
public:
    using InputError::InputError;
};

// A value outside the mathematical domain of an operation (e.g. T <= 1).
class DomainError : public InputError {
public:
    using InputError::InputError;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// The flood solver produced non-finite state.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bgi
