#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace attachnet {

// Precondition or user-input violation. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File could not be opened, read or written. The CLI maps this to exit code 1.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyCohortError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PathLimitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class FixtureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace attachnet
