#pragma once

#include <stdexcept>
#include <string>

namespace stlab {

// Bad setup: wrong backend/grid combination, out-of-range parameter, grid too small.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad data at runtime: non-finite values, empty mask, integrator divergence.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace stlab
