#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcentroid {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or infinite argument where a finite real is required.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid distribution or configuration parameter (e.g. sigma <= 0).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed excluded interval (upper <= lower, or an infinite end).
class IntervalError : public Error {
public:
    using Error::Error;
};

/// Support mass too small for the requested method.
class DeepTruncationError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature could not reach its tolerance within budget.
class ToleranceError : public Error {
public:
    using Error::Error;
};

class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline double require_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite");
    }
    return x;
}

}  // namespace detail

}  // namespace tcentroid
