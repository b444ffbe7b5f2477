#include "stlab/derivatives.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>

#include "stlab/errors.hpp"
#include "stlab/fft.hpp"

namespace stlab {

// Fornberg's recursion for finite-difference weights on arbitrary nodes.
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size());
  if (n < m + 1) throw ConfigError("fd_weights: not enough nodes for derivative order");
  // c[k][j]: weight of node j for the k-th derivative, built incrementally.
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c[m];
}

namespace {

// Stencil table for one (m, accuracy) pair on a unit-spaced segment:
// centered interior weights plus one-sided rows for each edge node.
struct StencilSet {
  int half = 0;                             // centered half-width
  int edge_points = 0;                      // one-sided window size
  std::vector<double> centered;             // size 2*half+1
  std::vector<std::vector<double>> at_left; // rows 0..half-1
};

StencilSet make_stencils(int m, int accuracy) {
  if (m < 1 || m > 2) throw ConfigError("segment_derivative: order must be 1 or 2");
  if (accuracy != 2 && accuracy != 4)
    throw ConfigError("segment_derivative: accuracy must be 2 or 4");
  StencilSet s;
  s.half = (m + accuracy - 1) / 2;
  s.edge_points = m + accuracy;
  std::vector<double> cnodes(2 * s.half + 1);
  for (int i = 0; i <= 2 * s.half; ++i) cnodes[i] = static_cast<double>(i - s.half);
  s.centered = fd_weights(0.0, cnodes, m);
  std::vector<double> enodes(s.edge_points);
  for (int i = 0; i < s.edge_points; ++i) enodes[i] = static_cast<double>(i);
  s.at_left.resize(s.half);
  for (int row = 0; row < s.half; ++row)
    s.at_left[row] = fd_weights(static_cast<double>(row), enodes, m);
  return s;
}

const StencilSet& stencils(int m, int accuracy) {
  static const StencilSet d1a2 = make_stencils(1, 2);
  static const StencilSet d1a4 = make_stencils(1, 4);
  static const StencilSet d2a2 = make_stencils(2, 2);
  static const StencilSet d2a4 = make_stencils(2, 4);
  if (m == 1) return accuracy == 2 ? d1a2 : d1a4;
  return accuracy == 2 ? d2a2 : d2a4;
}

template <typename T>
std::vector<T> segment_derivative_impl(std::span<const T> seg, double dx, int m,
                                       int accuracy) {
  const StencilSet& st = stencils(m, accuracy);
  const std::size_t n = seg.size();
  if (n < static_cast<std::size_t>(st.edge_points))
    throw ConfigError("segment_derivative: segment shorter than stencil");
  const double scale = 1.0 / (m == 1 ? dx : dx * dx);
  std::vector<T> out(n, T{});
  const int half = st.half;
  // left edge
  for (int row = 0; row < half; ++row) {
    T acc{};
    for (int j = 0; j < st.edge_points; ++j) acc += st.at_left[row][j] * seg[j];
    out[row] = acc * scale;
  }
  // interior
  for (std::size_t i = half; i + half < n; ++i) {
    T acc{};
    for (int j = -half; j <= half; ++j) acc += st.centered[j + half] * seg[i + j];
    out[i] = acc * scale;
  }
  // right edge by symmetry: mirror the left one-sided rows
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  for (int row = 0; row < half; ++row) {
    T acc{};
    for (int j = 0; j < st.edge_points; ++j)
      acc += st.at_left[row][j] * seg[n - 1 - j];
    out[n - 1 - row] = acc * scale * sign;
  }
  return out;
}

template <typename T>
Field<T> periodic_fd(const Field<T>& f, int m, int accuracy) {
  const StencilSet& st = stencils(m, accuracy);
  const std::size_t n = f.size();
  if (n < static_cast<std::size_t>(2 * st.half + 1))
    throw ConfigError("derivative: grid shorter than stencil");
  const double dx = f.grid().dx();
  const double scale = 1.0 / (m == 1 ? dx : dx * dx);
  Field<T> out(f.grid());
  const int half = st.half;
  for (std::size_t i = 0; i < n; ++i) {
    T acc{};
    for (int j = -half; j <= half; ++j) {
      const std::size_t idx = (i + n + static_cast<std::size_t>(j + static_cast<int>(n))) % n;
      acc += st.centered[j + half] * f[idx];
    }
    out[i] = acc * scale;
  }
  return out;
}

template <typename T>
Field<T> derivative(const Field<T>& f, DiffBackend backend, int m) {
  require_finite(f, "derivative input");
  if (backend == DiffBackend::spectral) {
    if (f.grid().mode() != GridMode::periodic)
      throw ConfigError("spectral backend requires a periodic grid");
    return spectral_derivative(f, m);
  }
  const int accuracy = backend == DiffBackend::fd2 ? 2 : 4;
  if (f.grid().mode() == GridMode::periodic) return periodic_fd(f, m, accuracy);
  std::vector<T> vals =
      segment_derivative_impl<T>(std::span<const T>(f.values()), f.grid().dx(), m, accuracy);
  return Field<T>(f.grid(), std::move(vals));
}

}  // namespace

RealField deriv1(const RealField& f, DiffBackend backend) { return derivative(f, backend, 1); }
RealField deriv2(const RealField& f, DiffBackend backend) { return derivative(f, backend, 2); }
ComplexField deriv1(const ComplexField& f, DiffBackend backend) {
  return derivative(f, backend, 1);
}
ComplexField deriv2(const ComplexField& f, DiffBackend backend) {
  return derivative(f, backend, 2);
}

std::vector<double> segment_derivative(std::span<const double> seg, double dx, int m,
                                       int accuracy) {
  return segment_derivative_impl<double>(seg, dx, m, accuracy);
}

double integrate(const RealField& f) {
  require_finite(f, "integrate input");
  const double dx = f.grid().dx();
  double sum = 0.0;
  if (f.grid().mode() == GridMode::periodic) {
    for (double v : f) sum += v;
    return sum * dx;
  }
  const std::size_t n = f.size();
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
  sum += 0.5 * (f[0] + f[n - 1]);
  return sum * dx;
}

std::vector<std::pair<std::size_t, std::size_t>> mask_runs(const Mask& mask) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  const std::size_t n = mask.size();
  while (i < n) {
    while (i < n && !mask[i]) ++i;
    if (i == n) break;
    std::size_t begin = i;
    while (i < n && mask[i]) ++i;
    runs.emplace_back(begin, i);
  }
  return runs;
}

}  // namespace stlab
