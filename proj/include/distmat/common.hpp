#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace distmat {

using index_t = std::int64_t;

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Buffer shape does not match what the operation requires.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Sample labels are duplicated, missing, or inconsistent between inputs.
class LabelError : public Error {
public:
    using Error::Error;
};

// Malformed on-disk input.
class ParseError : public Error {
public:
    using Error::Error;
};

// Degenerate variance, eigensolver non-convergence, and similar.
class NumericError : public Error {
public:
    using Error::Error;
};

// An operation that requires a validated matrix was given an unvalidated one.
class ValidationRequiredError : public Error {
public:
    using Error::Error;
};

// Allocation failure for a requested problem size.
class ResourceError : public Error {
public:
    using Error::Error;
};

inline constexpr index_t kDefaultTile = 16;

}  // namespace distmat
