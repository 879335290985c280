#pragma once

#include <stdexcept>
#include <string>

namespace hlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: malformed operators, broken invariants, caps exceeded.
// The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

class DimensionLimitError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class HistoryCountError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Tr(rho_f rho) vanishes, so post-selected quantities are undefined.
class DegeneratePostSelectionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Probabilities were requested from a set that fails the consistency check.
class InconsistentSetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A solver produced a result that failed its own verification.
// The CLI maps these to exit code 3.
class NumericFailure : public Error {
public:
    using Error::Error;
};

}  // namespace hlab
