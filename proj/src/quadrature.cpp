#include "closedweigh/quadrature.hpp"

#include <string>

#include "closedweigh/errors.hpp"
#include "closedweigh/spectral.hpp"

namespace closedweigh {

namespace {

template <class T>
T periodic_sum(std::span<const T> values, const Grid1D& grid) {
  if (values.size() != grid.size()) {
    throw ContractViolation("quadrature: " + std::to_string(values.size()) + " values for a grid of " +
                            std::to_string(grid.size()) + " points");
  }
  T s{};
  for (const auto& v : values) s += v;
  return s * grid.spacing();
}

}  // namespace

double quadrature(std::span<const double> values, const Grid1D& grid) { return periodic_sum(values, grid); }

Complex quadrature(std::span<const Complex> values, const Grid1D& grid) { return periodic_sum(values, grid); }

std::vector<double> running_integral(std::span<const double> values, const Grid1D& grid) {
  const double total = quadrature(values, grid);
  const std::size_t n = grid.size();
  const double mean = total / grid.length();

  // The Nyquist mode integrates to sin(pi x/dx)/k, which vanishes on the grid.
  std::vector<Complex> c(n), a(n);
  for (std::size_t j = 0; j < n; ++j) a[j] = values[j];
  Fft fft(n);
  fft.forward(a, c);
  const auto k = wavenumbers(grid, true);
  for (std::size_t j = 0; j < n; ++j) c[j] = k[j] == 0.0 ? Complex{} : c[j] / Complex(0.0, k[j]);
  fft.inverse(c, a);

  std::vector<double> out(n);
  const double offset = a[0].real();
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = mean * grid.spacing() * static_cast<double>(j) + (a[j].real() - offset);
  }
  return out;
}

}  // namespace closedweigh
