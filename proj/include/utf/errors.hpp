#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace utf {

// Every failure mode the library reports is a distinct type so callers (and
// the CLI exit-code mapping) can dispatch on it instead of parsing messages.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- construction / input validation ---------------------------------------

struct InvalidInput : Error {
    using Error::Error;
};

struct DimensionMismatch : InvalidInput {
    using InvalidInput::InvalidInput;
};

// --- dense linear algebra ---------------------------------------------------

struct SingularMatrix : Error {
    using Error::Error;
};

struct NonConvergence : Error {
    using Error::Error;
};

// --- analytic function DSL --------------------------------------------------

struct ParseError : Error {
    ParseError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
          offset(byte_offset) {}
    std::size_t offset;
};

struct DivisionByZeroConstant : ParseError {
    using ParseError::ParseError;
};

// Evaluation or spectral point landed on a pole / branch point.
struct SingularityHit : Error {
    using Error::Error;
};

// --- contour calculus -------------------------------------------------------

struct NoValidContour : Error {
    using Error::Error;
};

struct SingularResolvent : Error {
    using Error::Error;
};

struct NotNormal : Error {
    using Error::Error;
};

struct ClusterTooLarge : Error {
    using Error::Error;
};

// --- flags / corners --------------------------------------------------------

struct NotInvariant : Error {
    using Error::Error;
};

struct SingularCorner : Error {
    SingularCorner(const std::string& which_corner)
        : Error("singular corner: " + which_corner), which(which_corner) {}
    std::string which;
};

// --- checks -----------------------------------------------------------------

struct NotCommuting : Error {
    using Error::Error;
};

struct NotNilpotent : Error {
    using Error::Error;
};

// Multiplicative form needs the normal part bounded away from zero.
struct ZeroInSupport : Error {
    using Error::Error;
};

}  // namespace utf
