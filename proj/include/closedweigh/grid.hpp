#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace closedweigh {

using Complex = std::complex<double>;

/// Uniform periodic grid: x_j = origin + j * spacing, j = 0 .. n_points-1.
/// Point n_points wraps onto point 0.
class Grid1D {
 public:
  /// Throws ContractViolation unless n_points >= 8, n_points is even and length > 0.
  Grid1D(std::size_t n_points, double origin, double length);

  std::size_t size() const noexcept { return n_points_; }
  double origin() const noexcept { return origin_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_points_); }
  double point(std::size_t j) const noexcept { return origin_ + spacing() * static_cast<double>(j); }
  std::vector<double> points() const;

  /// Spacing of the conjugate (wavenumber times hbar) grid: 2*pi*hbar / length.
  double conjugate_spacing(double hbar = 1.0) const noexcept;

  /// Same period and origin, twice the number of points.
  Grid1D refined() const { return Grid1D(2 * n_points_, origin_, length_); }

  bool operator==(const Grid1D&) const = default;

 private:
  std::size_t n_points_;
  double origin_;
  double length_;
};

/// Complex amplitudes sampled on a Grid1D.
class WaveFunction {
 public:
  WaveFunction(Grid1D grid, std::vector<Complex> amplitudes);

  /// Samples f at every grid point.
  static WaveFunction sample(const Grid1D& grid, const std::function<Complex(double)>& f);

  const Grid1D& grid() const noexcept { return grid_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  const Complex& operator[](std::size_t j) const noexcept { return amplitudes_[j]; }

  /// sum |psi_j|^2 * spacing
  double norm_squared() const noexcept;
  /// <this, other> = sum conj(psi_j) phi_j * spacing; grids must match.
  Complex inner(const WaveFunction& other) const;
  /// |<this, other>|^2 / (|this|^2 |other|^2)
  double fidelity(const WaveFunction& other) const;
  double max_abs() const noexcept;

  /// Throws ContractViolation if the norm is zero.
  WaveFunction normalized() const;
  bool is_normalized(double tol = 1e-12) const noexcept;

 private:
  Grid1D grid_;
  std::vector<Complex> amplitudes_;
};

/// Momentum-space (conjugate) representation of a WaveFunction.
///
/// Values are sorted ascending; weights are probability densities so that
/// sum(weights) * conjugate_spacing == norm^2 of the source. The complex
/// amplitudes are kept so the transform can be inverted exactly.
struct Spectrum {
  Grid1D grid;  ///< grid of the source representation
  double hbar = 1.0;
  double conjugate_spacing = 0.0;
  std::vector<double> conjugate_values;
  std::vector<double> weights;
  std::vector<Complex> amplitudes;

  double total_weight() const noexcept;
  double mean() const noexcept;
  double stddev() const noexcept;
};

}  // namespace closedweigh
