#pragma once

#include <cmath>

#include "stlab/errors.hpp"

namespace stlab {

struct PhysParams {
  double hbar = 1.0;
  double m = 1.0;
  double beta = 1.0;

  // Inverse length scale of the self-trap equation.
  double lambda() const { return std::sqrt(4.0 * m / (hbar * hbar * beta)); }

  void validate() const {
    if (!(hbar > 0.0)) throw ConfigError("hbar must be > 0");
    if (!(m > 0.0)) throw ConfigError("m must be > 0");
    if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  }
};

}  // namespace stlab
