#pragma once

#include <stdexcept>
#include <string>

namespace latsym {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonInvertible : Error {
    using Error::Error;
};

struct NotAntisymmetric : Error {
    using Error::Error;
};

/// Requested operation exceeds the supported size bounds.
struct TooLarge : Error {
    using Error::Error;
};

struct NotSymplectic : Error {
    using Error::Error;
};

struct NotFree : Error {
    using Error::Error;
};

struct SearchFailed : Error {
    using Error::Error;
};

struct IllConditioned : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    using Error::Error;
};

struct NotDiagonalK : Error {
    using Error::Error;
};

struct ZeroEntry : Error {
    using Error::Error;
};

struct NotAFrame : Error {
    using Error::Error;
};

struct NotConverged : Error {
    using Error::Error;
};

struct NotRelated : Error {
    using Error::Error;
};

struct NotSeparable : Error {
    using Error::Error;
};

/// Input-document error with a position, for the expression/JSON layer.
struct ParseError : Error {
    int row = -1;
    int col = -1;
    ParseError(const std::string& what, int row_, int col_)
        : Error(what), row(row_), col(col_) {}
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace latsym
