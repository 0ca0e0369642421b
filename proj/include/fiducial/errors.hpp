#pragma once

#include <stdexcept>
#include <string>

namespace fiducial {

/// Base of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the family domain, the grid span or a closed-form precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The family violates the random-distribution contract (e.g. an RD that decreases in x).
class InvalidFamilyError : public Error {
public:
    using Error::Error;
};

class UnsupportedDomainError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// No parameter value attains the requested probability level.
class NoCoverageError : public Error {
public:
    using Error::Error;
};

class NotReducibleError : public Error {
public:
    using Error::Error;
};

class GridSymmetryError : public Error {
public:
    using Error::Error;
};

class DegenerateCombinationError : public Error {
public:
    using Error::Error;
};

class OracleInapplicableError : public Error {
public:
    using Error::Error;
};

/// Malformed family specification; the message names the offending field.
class SpecParseError : public Error {
public:
    using Error::Error;
};

/// Monotonicity and intersection checks disagree; tolerances are miscalibrated for the grid.
class InternalInconsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace fiducial
