#include "closedweigh/profile.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "closedweigh/errors.hpp"

namespace closedweigh {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// (2n+1) C(2n, n): makes u^n (1-u)^n integrate to one on [0, 1].
double bump_norm() {
  constexpr int n = kSmoothstepOrder;
  return (2 * n + 1) * binomial(2 * n, n);
}

double smoothstep(double u) {
  constexpr int n = kSmoothstepOrder;
  if (u > 0.5) return 1.0 - smoothstep(1.0 - u);
  double s = 0.0, pk = 1.0;
  for (int k = 0; k <= n; ++k) {
    s += binomial(n + k, k) * binomial(2 * n + 1, n - k) * pk;
    pk *= -u;
  }
  return std::pow(u, n + 1) * s;
}

}  // namespace

std::string_view to_string(ProfileShape shape) noexcept {
  switch (shape) {
    case ProfileShape::raised_cosine:
      return "raised-cosine";
    case ProfileShape::smoothstep_bump:
      return "smoothstep-bump";
  }
  return "unknown";
}

ProfileShape parse_shape(std::string_view name) {
  if (name == "raised-cosine") return ProfileShape::raised_cosine;
  if (name == "smoothstep-bump") return ProfileShape::smoothstep_bump;
  throw ContractViolation("unknown profile shape '" + std::string(name) +
                          "' (expected raised-cosine or smoothstep-bump)");
}

CouplingProfile::CouplingProfile(double t_start, double duration, ProfileShape shape, double area, Grid1D grid)
    : t_start_(t_start), duration_(duration), shape_(shape), area_(area), grid_(grid) {
  g_.resize(grid_.size());
  dg_.resize(grid_.size());
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    g_[j] = value(grid_.point(j));
    dg_[j] = derivative(grid_.point(j));
  }
}

double CouplingProfile::value(double tau) const noexcept {
  const double u = (tau - t_start_) / duration_;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double scale = area_ / duration_;
  switch (shape_) {
    case ProfileShape::raised_cosine:
      return scale * (1.0 - std::cos(2.0 * std::numbers::pi * u));
    case ProfileShape::smoothstep_bump:
      return scale * bump_norm() * std::pow(u * (1.0 - u), kSmoothstepOrder);
  }
  return 0.0;
}

double CouplingProfile::derivative(double tau) const noexcept {
  const double u = (tau - t_start_) / duration_;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double scale = area_ / (duration_ * duration_);
  switch (shape_) {
    case ProfileShape::raised_cosine:
      return scale * 2.0 * std::numbers::pi * std::sin(2.0 * std::numbers::pi * u);
    case ProfileShape::smoothstep_bump: {
      constexpr int n = kSmoothstepOrder;
      return scale * bump_norm() * n * std::pow(u * (1.0 - u), n - 1) * (1.0 - 2.0 * u);
    }
  }
  return 0.0;
}

double CouplingProfile::cumulative(double tau) const noexcept {
  const double u = (tau - t_start_) / duration_;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return area_;
  switch (shape_) {
    case ProfileShape::raised_cosine:
      return area_ * (u - std::sin(2.0 * std::numbers::pi * u) / (2.0 * std::numbers::pi));
    case ProfileShape::smoothstep_bump:
      return area_ * smoothstep(u);
  }
  return 0.0;
}

double CouplingProfile::peak() const noexcept {
  switch (shape_) {
    case ProfileShape::raised_cosine:
      return 2.0 * area_ / duration_;
    case ProfileShape::smoothstep_bump:
      return area_ * bump_norm() * std::pow(0.25, kSmoothstepOrder) / duration_;
  }
  return 0.0;
}

CouplingProfile CouplingProfile::with_area(double area) const {
  return CouplingProfile(t_start_, duration_, shape_, area, grid_);
}

CouplingProfile CouplingProfile::resampled(const Grid1D& grid) const {
  return CouplingProfile(t_start_, duration_, shape_, area_, grid);
}

CouplingProfile make_profile(double t_start, double duration, ProfileShape shape, const Grid1D& grid) {
  if (!(duration > 0.0) || !std::isfinite(duration) || !std::isfinite(t_start)) {
    throw Refusal("make_profile: duration must be finite and > 0");
  }
  const double lo = grid.origin();
  const double hi = grid.origin() + grid.length();
  if (t_start - duration < lo || t_start + 2.0 * duration > hi) {
    std::ostringstream msg;
    msg << "make_profile: support [" << t_start << ", " << t_start + duration
        << "] needs a margin of one duration on each side inside the grid period [" << lo << ", " << hi << ")";
    throw Refusal(msg.str());
  }
  if (duration > 0.25 * grid.length()) {
    throw Refusal("make_profile: support must cover at most 25% of the grid period");
  }
  return CouplingProfile(t_start, duration, shape, 1.0, grid);
}

}  // namespace closedweigh
