#pragma once

#include <string_view>
#include <vector>

#include "closedweigh/grid.hpp"

namespace closedweigh {

enum class ProfileShape {
  /// g = (1 - cos(2 pi u)) / tau0 on u in [0, 1]; continuously differentiable, max 2/tau0.
  raised_cosine,
  /// g = (2n+1) C(2n, n) u^n (1-u)^n / tau0 with n = 10: the derivative of the
  /// order-10 smoothstep. Nine continuous derivatives, max ~3.70/tau0.
  smoothstep_bump,
};

std::string_view to_string(ProfileShape shape) noexcept;
/// Accepts "raised-cosine" and "smoothstep-bump"; throws ContractViolation otherwise.
ProfileShape parse_shape(std::string_view name);

/// Polynomial order of the smoothstep bump.
inline constexpr int kSmoothstepOrder = 10;

/// Measurement switching function g(tau): non-negative, supported on
/// [t_start, t_start + duration], with analytic value, derivative and
/// cumulative integral. `area` is 1 for every profile built by make_profile;
/// with_area() exists for deliberately denormalized experiments.
class CouplingProfile {
 public:
  double t_start() const noexcept { return t_start_; }
  double duration() const noexcept { return duration_; }
  double t_end() const noexcept { return t_start_ + duration_; }
  ProfileShape shape() const noexcept { return shape_; }
  double area() const noexcept { return area_; }
  const Grid1D& grid() const noexcept { return grid_; }

  double value(double tau) const noexcept;
  double derivative(double tau) const noexcept;
  /// integral of g from -infinity to tau
  double cumulative(double tau) const noexcept;
  /// max over tau of g
  double peak() const noexcept;

  /// g and g' sampled on grid().
  const std::vector<double>& samples() const noexcept { return g_; }
  const std::vector<double>& derivative_samples() const noexcept { return dg_; }

  /// Copy whose integral is `area` instead of 1.
  CouplingProfile with_area(double area) const;
  /// Same profile re-sampled on another grid (no fit checks).
  CouplingProfile resampled(const Grid1D& grid) const;

 private:
  friend CouplingProfile make_profile(double, double, ProfileShape, const Grid1D&);
  CouplingProfile(double t_start, double duration, ProfileShape shape, double area, Grid1D grid);

  double t_start_;
  double duration_;
  ProfileShape shape_;
  double area_;
  Grid1D grid_;
  std::vector<double> g_;
  std::vector<double> dg_;
};

/// Builds a unit-area profile sampled on `grid`.
///
/// Refuses (Refusal) unless duration > 0, the support fits inside one grid
/// period with at least `duration` of margin on each side, and the support
/// covers no more than 25% of the period.
CouplingProfile make_profile(double t_start, double duration, ProfileShape shape, const Grid1D& grid);

}  // namespace closedweigh
