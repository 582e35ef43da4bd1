#pragma once

#include <stdexcept>

namespace dqnn {

/// Base type for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityError : Error { using Error::Error; }; // register size guard
struct WiringError : Error { using Error::Error; };   // invalid qubit wiring
struct NumericError : Error { using Error::Error; };  // non-finite numeric input
struct ShapeError : Error { using Error::Error; };    // vector length mismatch
struct RangeError : Error { using Error::Error; };    // value outside documented range
struct ConfigError : Error { using Error::Error; };   // invalid configuration
struct ParseError : Error { using Error::Error; };    // text parse failure (carries location)
struct FormatError : Error { using Error::Error; };   // binary container violation

} // namespace dqnn
