#pragma once

#include <stdexcept>
#include <string>

namespace fts {

/// Base class for all errors raised by the toolkit. The CLI maps these to
/// exit codes: data-shaped errors -> 2, convergence failures -> 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text: bad row, unparseable number, non-finite value.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input does not match the declared column schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Timestamps out of order.
class OrderingError : public Error {
public:
    using Error::Error;
};

/// Operation applied in the wrong state (e.g. normalizing twice).
class StateError : public Error {
public:
    using Error::Error;
};

/// Vector/matrix dimension mismatch.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Degenerate or empty data: single-class training sets, empty windows,
/// empty series.
class DataError : public Error {
public:
    using Error::Error;
};

/// Streams share no common time span.
class AlignmentError : public DataError {
public:
    using DataError::DataError;
};

/// Invalid configuration (flag combinations, missing profiles).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Training diverged (non-finite loss).
class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace fts
