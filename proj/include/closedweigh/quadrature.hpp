#pragma once

#include <span>
#include <vector>

#include "closedweigh/grid.hpp"

namespace closedweigh {

/// Periodic-grid integral sum(values) * spacing. Exact for trigonometric
/// polynomials below the Nyquist limit. Throws ContractViolation on size mismatch.
double quadrature(std::span<const double> values, const Grid1D& grid);
Complex quadrature(std::span<const Complex> values, const Grid1D& grid);

/// Running antiderivative F(x_j) = integral from grid.origin() to x_j.
///
/// The mean of `values` integrates to a linear ramp; the zero-mean part is
/// integrated spectrally. F(x_0) = 0 and F(x_n) (one period) equals quadrature().
std::vector<double> running_integral(std::span<const double> values, const Grid1D& grid);

}  // namespace closedweigh
