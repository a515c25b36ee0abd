#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracid {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: bad shapes, out-of-domain values, malformed files.
/// The CLI maps these to exit code 1.
class ArgumentError : public Error {
public:
    using Error::Error;
};

class ParseError : public ArgumentError {
public:
    ParseError(const std::string& what, std::size_t line)
        : ArgumentError(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Valid input that the numerics could not handle. CLI exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class PoleAtFrequencyError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IdentifiabilityError : public NumericalError {
public:
    IdentifiabilityError(const std::string& what, std::vector<std::size_t> columns)
        : NumericalError(what), columns_(std::move(columns)) {}
    const std::vector<std::size_t>& deficient_columns() const noexcept { return columns_; }

private:
    std::vector<std::size_t> columns_;
};

} // namespace fracid
