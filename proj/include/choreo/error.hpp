#pragma once

#include <stdexcept>
#include <string>

namespace choreo {

// Base class for all engine errors. Subclasses map onto CLI exit codes:
// validation-family errors exit 1, I/O errors exit 2, anything else 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad input data: wrong shapes, broken invariants, out-of-range values.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Malformed file contents. Messages name the file and the offending field.
class ParseError : public ValidationError {
public:
    explicit ParseError(const std::string& msg) : ValidationError(msg) {}
};

// Index or window outside the valid range.
class BoundsError : public ValidationError {
public:
    explicit BoundsError(const std::string& msg) : ValidationError(msg) {}
};

// Unsupported container/encoding (e.g. a non-PCM WAV).
class FormatError : public ValidationError {
public:
    explicit FormatError(const std::string& msg) : ValidationError(msg) {}
};

// Operation called on an object in the wrong state (unfitted table, empty graph).
class StateError : public ValidationError {
public:
    explicit StateError(const std::string& msg) : ValidationError(msg) {}
};

// No solution exists under the problem constraints (e.g. source too short for DTW).
class InfeasibleError : public ValidationError {
public:
    explicit InfeasibleError(const std::string& msg) : ValidationError(msg) {}
};

// Filesystem-level failure: missing file, unreadable/unwritable path.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace choreo
