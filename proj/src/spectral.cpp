#include "closedweigh/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "closedweigh/errors.hpp"

namespace closedweigh {

static_assert(sizeof(Complex) == sizeof(fftw_complex), "std::complex<double> must match fftw_complex layout");

struct Fft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

// FFTW planning is not thread safe; execution with fftw_execute_dft is.
// FFTW_UNALIGNED keeps the chosen codelets independent of buffer alignment,
// so results are bit-reproducible for any caller-owned array.
std::shared_ptr<const Fft::Plans> Fft::plans_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<Plans>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plans = std::make_shared<Plans>();
  std::vector<Complex> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  const int len = static_cast<int>(n);
  plans->forward = fftw_plan_dft_1d(len, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans->backward = fftw_plan_dft_1d(len, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans->forward || !plans->backward) throw Error("FFTW failed to create a plan");
  cache.emplace(n, plans);
  return plans;
}

Fft::Fft(std::size_t n) : n_(n), plans_(plans_for(n)) {}

void Fft::forward(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) throw ContractViolation("Fft::forward: size mismatch");
  fftw_execute_dft(plans_->forward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft::inverse(std::span<const Complex> in, std::span<Complex> out) const {
  if (in.size() != n_ || out.size() != n_) throw ContractViolation("Fft::inverse: size mismatch");
  fftw_execute_dft(plans_->backward, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double s = 1.0 / static_cast<double>(n_);
  for (auto& v : out) v *= s;
}

std::vector<double> wavenumbers(const Grid1D& grid, bool zero_nyquist) {
  const std::size_t n = grid.size();
  const double dk = 2.0 * std::numbers::pi / grid.length();
  std::vector<double> k(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto m = static_cast<double>(j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n));
    k[j] = dk * m;
  }
  if (zero_nyquist) k[n / 2] = 0.0;
  return k;
}

SpectralDerivative::SpectralDerivative(const Grid1D& grid)
    : grid_(grid), fft_(grid.size()), k_(wavenumbers(grid, true)) {}

void SpectralDerivative::apply(std::span<const Complex> in, std::span<Complex> out,
                               std::span<Complex> scratch) const {
  fft_.forward(in, scratch);
  for (std::size_t j = 0; j < k_.size(); ++j) scratch[j] *= Complex(0.0, k_[j]);
  fft_.inverse(scratch, out);
}

WaveFunction spectral_derivative(const WaveFunction& f) {
  SpectralDerivative d(f.grid());
  std::vector<Complex> out(f.size()), scratch(f.size());
  d.apply(f.amplitudes(), out, scratch);
  return WaveFunction(f.grid(), std::move(out));
}

namespace {

// DFT index of the j-th entry of an ascending-sorted spectrum.
std::size_t sorted_to_dft(std::size_t j, std::size_t n) { return (j + n / 2) % n; }

}  // namespace

Spectrum to_conjugate(const WaveFunction& f, double hbar) {
  if (std::abs(f.norm_squared() - 1.0) > 1e-10) {
    throw ContractViolation("to_conjugate: input must be normalized (norm^2 = " + std::to_string(f.norm_squared()) +
                            ")");
  }
  if (!(hbar > 0.0)) throw ContractViolation("to_conjugate: hbar must be > 0");
  const Grid1D& grid = f.grid();
  const std::size_t n = grid.size();
  Fft fft(n);
  std::vector<Complex> c(n);
  fft.forward(f.amplitudes(), c);

  const auto k = wavenumbers(grid, false);
  const double scale = grid.spacing() / std::sqrt(2.0 * std::numbers::pi * hbar);

  Spectrum s{grid, hbar, grid.conjugate_spacing(hbar), {}, {}, {}};
  s.conjugate_values.resize(n);
  s.weights.resize(n);
  s.amplitudes.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t d = sorted_to_dft(j, n);
    const Complex a = scale * c[d] * std::polar(1.0, -k[d] * grid.origin());
    s.conjugate_values[j] = hbar * k[d];
    s.amplitudes[j] = a;
    s.weights[j] = std::norm(a);
  }
  return s;
}

WaveFunction from_conjugate(const Spectrum& spectrum) {
  const Grid1D& grid = spectrum.grid;
  const std::size_t n = grid.size();
  if (spectrum.amplitudes.size() != n) throw ContractViolation("from_conjugate: spectrum size does not match its grid");
  const auto k = wavenumbers(grid, false);
  const double scale = std::sqrt(2.0 * std::numbers::pi * spectrum.hbar) / grid.spacing();
  std::vector<Complex> c(n), out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t d = sorted_to_dft(j, n);
    c[d] = scale * spectrum.amplitudes[j] * std::polar(1.0, k[d] * grid.origin());
  }
  Fft(n).inverse(c, out);
  return WaveFunction(grid, std::move(out));
}

}  // namespace closedweigh
