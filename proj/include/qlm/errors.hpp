#pragma once

#include <stdexcept>
#include <string>

namespace qlm {

/// Numerical routine failed to produce a valid result (non-convergence,
/// degenerate data). Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A curve fit has no decay to fit (flat data or non-negative slope).
class DegenerateFitError : public NumericalError {
public:
    explicit DegenerateFitError(const std::string& what) : NumericalError(what) {}
};

/// Not enough usable data points for a fit. Input-data problem, so this is
/// a validation error (CLI exit code 1).
class TooFewPointsError : public std::invalid_argument {
public:
    explicit TooFewPointsError(const std::string& what) : std::invalid_argument(what) {}
};

/// File could not be written or read completely. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qlm
