#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "stlab/field.hpp"

namespace stlab {

// Angular wavenumbers in FFT storage order: 2*pi*j/L for j = 0..n/2, then the
// negative frequencies. Requires a periodic grid with even n.
std::vector<double> wavenumbers(const Grid& grid);

// Complex 1-D transform pair (FFTW behind the scenes). An Fft object owns its
// work buffers and is not safe for concurrent use; create one per thread.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const;
  void forward(std::vector<std::complex<double>>& data) const;  // unnormalized
  void inverse(std::vector<std::complex<double>>& data) const;  // scaled by 1/n

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Spectral derivative of given order; the Nyquist mode is zeroed for odd
// orders. Periodic grids only.
ComplexField spectral_derivative(const ComplexField& f, int order);
RealField spectral_derivative(const RealField& f, int order);

}  // namespace stlab
