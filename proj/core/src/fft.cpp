#include "stlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "stlab/errors.hpp"

namespace stlab {

namespace {
// FFTW plan creation is not thread safe; execution of distinct plans is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<double> wavenumbers(const Grid& grid) {
  if (grid.mode() != GridMode::periodic)
    throw ConfigError("wavenumbers: grid must be periodic");
  const std::size_t n = grid.n();
  if (n % 2 != 0) throw ConfigError("wavenumbers: grid size must be even");
  const double dk = 2.0 * std::numbers::pi / grid.length();
  std::vector<double> k(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) k[i] = dk * static_cast<double>(i);
  for (std::size_t i = half; i < n; ++i)
    k[i] = dk * (static_cast<double>(i) - static_cast<double>(n));
  return k;
}

struct Fft::Impl {
  std::size_t n;
  fftw_complex* buf;
  fftw_plan fwd;
  fftw_plan inv;

  explicit Impl(std::size_t size) : n(size) {
    buf = fftw_alloc_complex(n);
    if (!buf) throw DataError("fft: allocation failed");
    std::lock_guard<std::mutex> lock(plan_mutex());
    fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(buf);
  }
};

Fft::Fft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
Fft::~Fft() = default;

std::size_t Fft::size() const { return impl_->n; }

void Fft::forward(std::vector<std::complex<double>>& data) const {
  if (data.size() != impl_->n) throw ConfigError("fft: size mismatch");
  auto* b = reinterpret_cast<std::complex<double>*>(impl_->buf);
  std::copy(data.begin(), data.end(), b);
  fftw_execute(impl_->fwd);
  std::copy(b, b + impl_->n, data.begin());
}

void Fft::inverse(std::vector<std::complex<double>>& data) const {
  if (data.size() != impl_->n) throw ConfigError("fft: size mismatch");
  auto* b = reinterpret_cast<std::complex<double>*>(impl_->buf);
  std::copy(data.begin(), data.end(), b);
  fftw_execute(impl_->inv);
  const double norm = 1.0 / static_cast<double>(impl_->n);
  for (std::size_t i = 0; i < impl_->n; ++i) data[i] = b[i] * norm;
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
  if (order < 1) throw ConfigError("spectral_derivative: order must be positive");
  const Grid& g = f.grid();
  const std::vector<double> k = wavenumbers(g);
  const std::size_t n = g.n();
  Fft fft(n);
  std::vector<std::complex<double>> data(f.values());
  fft.forward(data);
  const std::complex<double> I(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> factor = std::pow(I * k[i], order);
    data[i] *= factor;
  }
  // the Nyquist mode has no well-defined sign for odd derivatives
  if (order % 2 != 0) data[n / 2] = 0.0;
  fft.inverse(data);
  return ComplexField(g, std::move(data));
}

RealField spectral_derivative(const RealField& f, int order) {
  std::vector<std::complex<double>> tmp(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) tmp[i] = f[i];
  ComplexField out = spectral_derivative(ComplexField(f.grid(), std::move(tmp)), order);
  std::vector<double> re(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) re[i] = out[i].real();
  return RealField(f.grid(), std::move(re));
}

}  // namespace stlab
