#pragma once

#include <stdexcept>
#include <string>

namespace novtel {

/// Input fails a structural or algebraic check (d^2 != 0, non-closed unit, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input is well-formed but outside the supported fragment (e.g. a tail whose
/// kernel chain does not stabilize to a free quotient).
class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented resource cap was hit.
class ResourceCapError : public std::runtime_error {
public:
    explicit ResourceCapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace novtel
