#pragma once

#include <stdexcept>
#include <string>

namespace fetc {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Degenerate engagement geometry (coincident positions, non-positive range).
class GeometryError : public Error {
  public:
    using Error::Error;
};

/// A guidance or reaching-law parameter outside its valid domain.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// Query outside the domain of a closed-form expression.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Scenario file violates the documented key schema.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Integration produced a non-finite state.
class NumericError : public Error {
  public:
    NumericError(const std::string& what, double t) : Error(what), time(t) {}
    double time; ///< simulation time of the offending step [s]
};

/// Engagement runs are not comparable (different scenario geometry).
class ComparisonError : public Error {
  public:
    using Error::Error;
};

} // namespace fetc
