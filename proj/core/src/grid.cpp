#include "stlab/grid.hpp"

#include "stlab/errors.hpp"

namespace stlab {

Grid::Grid(double x_min, double x_max, std::size_t n, GridMode mode)
    : x_min_(x_min), x_max_(x_max), n_(n), mode_(mode) {
  if (n_ < 8) throw ConfigError("grid needs at least 8 points");
  if (!(x_max_ > x_min_)) throw ConfigError("grid requires x_max > x_min");
  const auto denom =
      mode_ == GridMode::bounded ? static_cast<double>(n_ - 1) : static_cast<double>(n_);
  dx_ = (x_max_ - x_min_) / denom;
  if (!(dx_ > 0.0)) throw ConfigError("grid spacing must be positive");
}

std::vector<double> Grid::points() const {
  std::vector<double> p(n_);
  for (std::size_t i = 0; i < n_; ++i) p[i] = point(i);
  return p;
}

}  // namespace stlab
