#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "closedweigh/grid.hpp"

namespace closedweigh {

/// Unnormalized forward DFT and 1/n-normalized inverse of a fixed length.
///
/// Plans are created once per length and shared; execution is thread safe.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  void forward(std::span<const Complex> in, std::span<Complex> out) const;
  void inverse(std::span<const Complex> in, std::span<Complex> out) const;

 private:
  struct Plans;
  static std::shared_ptr<const Plans> plans_for(std::size_t n);
  std::size_t n_;
  std::shared_ptr<const Plans> plans_;
};

/// Angular wavenumbers in DFT order. With `zero_nyquist` the unpaired
/// Nyquist mode is set to 0, which is the right choice for odd operators
/// such as d/dx.
std::vector<double> wavenumbers(const Grid1D& grid, bool zero_nyquist);

/// df/dx via the conjugate representation. Exact for band-limited f.
WaveFunction spectral_derivative(const WaveFunction& f);

/// Reusable derivative operator for one grid (avoids re-deriving the
/// wavenumber table in inner loops).
class SpectralDerivative {
 public:
  explicit SpectralDerivative(const Grid1D& grid);

  const Grid1D& grid() const noexcept { return grid_; }
  /// out = d(in)/dx. `scratch` must have grid.size() elements.
  void apply(std::span<const Complex> in, std::span<Complex> out, std::span<Complex> scratch) const;

 private:
  Grid1D grid_;
  Fft fft_;
  std::vector<double> k_;
};

/// Conjugate-variable distribution of a normalized wavefunction with the
/// convention phi(p) = (2 pi hbar)^(-1/2) * integral f(x) exp(-i p x / hbar) dx.
/// Throws ContractViolation if |norm^2 - 1| > 1e-10.
Spectrum to_conjugate(const WaveFunction& f, double hbar = 1.0);

/// Inverse of to_conjugate.
WaveFunction from_conjugate(const Spectrum& spectrum);

}  // namespace closedweigh
