#pragma once

#include <stdexcept>
#include <string>

namespace gcol {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation (r <= 0, dt <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Matrix or vector dimensions do not match.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A requested Bessel order is not an integer or half-integer.
class UnsupportedOrderError : public Error {
public:
    using Error::Error;
};

/// Point or surface data is inconsistent (missing normals, off-surface point, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Operator assembly failed for a specific row.
class AssemblyError : public Error {
public:
    using Error::Error;
};

/// Inputs for which an algorithm has nothing to do (e.g. a zero right-hand side).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gcol
