#pragma once

#include <stdexcept>
#include <string>

namespace gibbslab {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class DegenerateSupport : public Error {
public:
    using Error::Error;
};

class UnsupportedSpec : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class UnsupportedParametrization : public Error {
public:
    using Error::Error;
};

// Raised when a conditional has collapsed to a point mass; the sampler would be reducible.
class DegenerateConditional : public Error {
public:
    using Error::Error;
};

// Raised when Theta cannot move without breaking a data constraint.
class ConstraintViolation : public Error {
public:
    using Error::Error;
};

class NonFiniteTarget : public Error {
public:
    using Error::Error;
};

class SupportNotCovered : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class InsufficientLength : public Error {
public:
    using Error::Error;
};

class OracleUnavailable : public Error {
public:
    using Error::Error;
};

class StoreCorruption : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace gibbslab
