#pragma once

#include <stdexcept>
#include <string>

namespace boundedrank {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedField : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class Singular : public Error {
public:
    Singular() : Error("matrix is singular") {}
};

/// An enumeration would visit more objects than the caller allowed.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Hypotheses of an operation were checked and found violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class CodimTooSmall : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace boundedrank
