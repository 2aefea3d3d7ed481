#pragma once

#include <stdexcept>
#include <string>

namespace powernet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// caller supplied something the library cannot accept
class ValidationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnsupportedError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class StrategyError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class CompletenessError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// floating point trouble at run time
class NumericalError : public Error {
public:
    using Error::Error;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace powernet
