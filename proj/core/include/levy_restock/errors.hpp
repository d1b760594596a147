#pragma once

#include <stdexcept>
#include <string>

namespace levy_restock {

// Bad input: violated invariants, malformed configs. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure at runtime. Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateRootError : public NumericError {
public:
    using NumericError::NumericError;
};

class DivergenceError : public NumericError {
public:
    using NumericError::NumericError;
};

class DegreeOverflowError : public NumericError {
public:
    using NumericError::NumericError;
};

class NoFiniteThreshold : public NumericError {
public:
    using NumericError::NumericError;
};

class NoCrossing : public NumericError {
public:
    using NumericError::NumericError;
};

class BracketFailure : public NumericError {
public:
    using NumericError::NumericError;
};

class UnsupportedOrder : public NumericError {
public:
    using NumericError::NumericError;
};

class ToleranceNotMet : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace levy_restock
