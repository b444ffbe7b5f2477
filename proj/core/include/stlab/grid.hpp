#pragma once

#include <cstddef>
#include <vector>

namespace stlab {

enum class GridMode { bounded, periodic };

// Uniform 1-D lattice. Bounded grids include both endpoints; periodic grids
// identify x_max with x_min and do not duplicate the endpoint.
class Grid {
 public:
  Grid(double x_min, double x_max, std::size_t n, GridMode mode);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n() const { return n_; }
  double dx() const { return dx_; }
  GridMode mode() const { return mode_; }
  double length() const { return x_max_ - x_min_; }

  double point(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  std::vector<double> points() const;

  bool operator==(const Grid&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  GridMode mode_;
  double dx_;
};

}  // namespace stlab
