#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "stlab/errors.hpp"
#include "stlab/grid.hpp"

namespace stlab {

// Per-node validity flags. Nonzero means the node carries meaningful data.
using Mask = std::vector<std::uint8_t>;

template <typename T>
class Field {
 public:
  explicit Field(Grid grid) : grid_(std::move(grid)), values_(grid_.n(), T{}) {}

  Field(Grid grid, std::vector<T> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.n())
      throw ConfigError("field length does not match grid point count");
  }

  template <typename F>
  static Field sample(const Grid& grid, F&& f) {
    std::vector<T> v(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) v[i] = f(grid.point(i));
    return Field(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool finite() const {
    for (const T& v : values_)
      if (!is_finite(v)) return false;
    return true;
  }

 private:
  static bool is_finite(double v) { return std::isfinite(v); }
  static bool is_finite(const std::complex<double>& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }

  Grid grid_;
  std::vector<T> values_;
};

using RealField = Field<double>;
using ComplexField = Field<std::complex<double>>;

template <typename T>
void require_finite(const Field<T>& f, const char* what) {
  if (!f.finite()) throw DataError(std::string(what) + ": non-finite values");
}

}  // namespace stlab
