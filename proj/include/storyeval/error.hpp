#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace storyeval {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input record; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Raised when a computation is asked of data that cannot support it
/// (zero-norm vectors, singleton groups, rank-deficient designs, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace storyeval
