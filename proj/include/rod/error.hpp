#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few observations for the requested statistic.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Window with zero standard deviation.
class DegenerateSeries : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidPlan : public Error {
public:
    using Error::Error;
};

/// ROC input containing a single class only.
class OneClassInput : public Error {
public:
    using Error::Error;
};

/// A simulated state left the finite range.
class NonFinite : public Error {
public:
    NonFinite(std::size_t step, const std::string& what)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Malformed input file. `row()` is 1-based and counts the header line.
class ParseError : public Error {
public:
    ParseError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace rod
