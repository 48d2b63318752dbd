#pragma once

#include <stdexcept>
#include <string>

namespace socdw {

/// A configuration violates a documented invariant (bad grid, bad trap, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A numerical procedure failed a quality gate (residual, norm drift, ...).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace socdw
