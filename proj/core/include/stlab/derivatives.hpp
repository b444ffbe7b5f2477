#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stlab/field.hpp"

namespace stlab {

enum class DiffBackend { fd2, fd4, spectral };

// d/dx and d^2/dx^2 on a whole field. Bounded grids use one-sided stencils of
// matching order at the edges; periodic grids wrap. The spectral backend is
// defined only for periodic grids with even n.
RealField deriv1(const RealField& f, DiffBackend backend);
RealField deriv2(const RealField& f, DiffBackend backend);
ComplexField deriv1(const ComplexField& f, DiffBackend backend);
ComplexField deriv2(const ComplexField& f, DiffBackend backend);

// Quadrature: trapezoid on bounded grids, rectangle sum on periodic ones.
double integrate(const RealField& f);

// Finite-difference weights for the m-th derivative at point x0 given node
// locations (Fornberg's recursion).
std::vector<double> fd_weights(double x0, std::span<const double> nodes, int m);

// m-th derivative of a contiguous segment of uniformly spaced samples,
// interior stencils centered, edges one-sided at the same accuracy.
// Valid m: 1 or 2; accuracy: 2 or 4. Requires seg.size() >= m + accuracy.
std::vector<double> segment_derivative(std::span<const double> seg, double dx, int m,
                                       int accuracy);

// Half-open [begin, end) index ranges of contiguous nonzero mask entries.
std::vector<std::pair<std::size_t, std::size_t>> mask_runs(const Mask& mask);

}  // namespace stlab
