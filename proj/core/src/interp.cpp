#include "stlab/interp.hpp"

#include <algorithm>
#include <cmath>

#include "stlab/errors.hpp"

namespace stlab {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y,
                             std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  if (x_.size() < 2) throw ConfigError("interp: need at least two nodes");
  if (x_.size() != y_.size() || x_.size() != dy_.size())
    throw ConfigError("interp: node array sizes differ");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("interp: nodes must increase");

  // Fritsch-Carlson: clamp slopes so each cubic piece stays monotone.
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    const double h = x_[i + 1] - x_[i];
    const double d = (y_[i + 1] - y_[i]) / h;
    if (d == 0.0) {
      dy_[i] = 0.0;
      dy_[i + 1] = 0.0;
      continue;
    }
    const double a = dy_[i] / d;
    const double b = dy_[i + 1] / d;
    if (a < 0.0) dy_[i] = 0.0;
    if (b < 0.0) dy_[i + 1] = 0.0;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double s = 3.0 / std::sqrt(r);
      dy_[i] = s * a * d;
      dy_[i + 1] = s * b * d;
    }
  }
}

std::size_t MonotoneCubic::interval(double xq) const {
  if (xq <= x_.front()) return 0;
  if (xq >= x_.back()) return x_.size() - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), xq);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double MonotoneCubic::operator()(double xq) const {
  const std::size_t i = interval(xq);
  const double h = x_[i + 1] - x_[i];
  const double t = (xq - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
}

double MonotoneCubic::derivative(double xq) const {
  const std::size_t i = interval(xq);
  const double h = x_[i + 1] - x_[i];
  const double t = (xq - x_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * y_[i] + d10 * dy_[i] + d01 * y_[i + 1] + d11 * dy_[i + 1];
}

}  // namespace stlab
