#pragma once

#include <stdexcept>
#include <string>

namespace vrs {

/// Base class for all numeric and domain errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class NotHermitian : public Error {
public:
    using Error::Error;
};

class DegenerateSteadyState : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ResolventSingular : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class FitDiverged : public Error {
public:
    using Error::Error;
};

class ZeroPopulation : public Error {
public:
    using Error::Error;
};

class BelowThreshold : public Error {
public:
    using Error::Error;
};

/// Violated operation precondition (bad argument values, insufficient data).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Config file syntax error. Carries 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Config semantic error (unknown key, out-of-range value, missing field).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace vrs
