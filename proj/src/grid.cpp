#include "closedweigh/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "closedweigh/errors.hpp"

namespace closedweigh {

Grid1D::Grid1D(std::size_t n_points, double origin, double length)
    : n_points_(n_points), origin_(origin), length_(length) {
  if (n_points < 8 || n_points % 2 != 0) {
    throw ContractViolation("Grid1D: n_points must be even and >= 8, got " + std::to_string(n_points));
  }
  if (!(length > 0.0) || !std::isfinite(length) || !std::isfinite(origin)) {
    throw ContractViolation("Grid1D: length must be finite and > 0");
  }
}

std::vector<double> Grid1D::points() const {
  std::vector<double> x(n_points_);
  for (std::size_t j = 0; j < n_points_; ++j) x[j] = point(j);
  return x;
}

double Grid1D::conjugate_spacing(double hbar) const noexcept {
  return 2.0 * std::numbers::pi * hbar / length_;
}

WaveFunction::WaveFunction(Grid1D grid, std::vector<Complex> amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size()) {
    throw ContractViolation("WaveFunction: " + std::to_string(amplitudes_.size()) + " amplitudes for a grid of " +
                            std::to_string(grid_.size()) + " points");
  }
}

WaveFunction WaveFunction::sample(const Grid1D& grid, const std::function<Complex(double)>& f) {
  std::vector<Complex> a(grid.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = f(grid.point(j));
  return WaveFunction(grid, std::move(a));
}

double WaveFunction::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return s * grid_.spacing();
}

Complex WaveFunction::inner(const WaveFunction& other) const {
  if (!(grid_ == other.grid_)) throw ContractViolation("WaveFunction::inner: grids differ");
  Complex s{0.0, 0.0};
  for (std::size_t j = 0; j < amplitudes_.size(); ++j) s += std::conj(amplitudes_[j]) * other.amplitudes_[j];
  return s * grid_.spacing();
}

double WaveFunction::fidelity(const WaveFunction& other) const {
  return std::norm(inner(other)) / (norm_squared() * other.norm_squared());
}

double WaveFunction::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& a : amplitudes_) m = std::max(m, std::abs(a));
  return m;
}

WaveFunction WaveFunction::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw ContractViolation("WaveFunction::normalized: zero or non-finite norm");
  const double s = 1.0 / std::sqrt(n2);
  std::vector<Complex> a(amplitudes_);
  for (auto& v : a) v *= s;
  return WaveFunction(grid_, std::move(a));
}

bool WaveFunction::is_normalized(double tol) const noexcept { return std::abs(norm_squared() - 1.0) <= tol; }

double Spectrum::total_weight() const noexcept {
  double s = 0.0;
  for (double w : weights) s += w;
  return s * conjugate_spacing;
}

double Spectrum::mean() const noexcept {
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    s += weights[j] * conjugate_values[j];
    w += weights[j];
  }
  return s / w;
}

double Spectrum::stddev() const noexcept {
  const double m = mean();
  double s = 0.0, w = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double d = conjugate_values[j] - m;
    s += weights[j] * d * d;
    w += weights[j];
  }
  return std::sqrt(s / w);
}

}  // namespace closedweigh
