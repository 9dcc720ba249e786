#pragma once

#include <stdexcept>
#include <string>

namespace fluctsel {

/// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input: parameters, configuration or files that violate a
/// precondition. The CLI maps these to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A computation that could not be carried out (non-convergence, NaN,
/// solver breakdown). The CLI maps these to exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The population cannot persist: no positive periodic orbit exists.
class ExtinctionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace fluctsel
