#pragma once

#include <cstddef>
#include <vector>

namespace stlab {

// Piecewise-cubic Hermite interpolant with the Fritsch-Carlson monotonicity
// limiter applied to the supplied slopes. Strictly increasing abscissae.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double xq) const;
  double derivative(double xq) const;

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::size_t interval(double xq) const;

  std::vector<double> x_, y_, dy_;
};

}  // namespace stlab
