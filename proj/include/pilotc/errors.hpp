#pragma once

#include <stdexcept>
#include <string>

namespace pilotc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values, non-monotone timestamps and similar bad data.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// A documented precondition on an argument was violated.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// An integer value does not fit its target representation.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A bit stream ran out before a value was complete.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// Bad magic or unsupported version.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid payload: count mismatch, malformed block, bad padding.
class CorruptionError : public Error {
public:
    using Error::Error;
};

/// A query timestamp is not covered by any sub-trajectory or outlier.
class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(double timestamp)
        : Error("timestamp " + std::to_string(timestamp) + " is outside every sub-trajectory"),
          timestamp_(timestamp) {}

    double timestamp() const noexcept { return timestamp_; }

private:
    double timestamp_;
};

} // namespace pilotc
