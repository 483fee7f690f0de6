#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "closedweigh/grid.hpp"
#include "closedweigh/spectral.hpp"

namespace closedweigh {

/// Generator of  d psi/dt = -v(x) d psi/dx - (v'(x)/2) psi - i w(x) psi
/// on a periodic grid.
///
/// The transport part is discretized in skew-symmetric form
/// -(v D + D v)/2, which equals -v d/dx - v'/2 in the continuum and is
/// exactly anti-Hermitian on the grid. The Hermitian operator H = i A is
/// what the Chebyshev propagator expands.
class AdvectionGenerator {
 public:
  AdvectionGenerator(const Grid1D& grid, std::vector<double> speed, std::vector<double> phase);

  const Grid1D& grid() const noexcept { return derivative_.grid(); }
  std::size_t size() const noexcept { return speed_.size(); }

  /// out = H in, with H = i A.
  void apply_hamiltonian(std::span<const Complex> in, std::span<Complex> out) const;
  /// Upper bound on the spectral radius of H.
  double spectral_bound() const noexcept { return bound_; }
  double max_speed() const noexcept { return max_speed_; }

  /// <psi, H psi> (real up to roundoff).
  double expectation(const WaveFunction& psi) const;

 private:
  SpectralDerivative derivative_;
  std::vector<double> speed_;
  std::vector<double> phase_;
  double bound_ = 0.0;
  double max_speed_ = 0.0;
  mutable std::vector<Complex> scratch_a_, scratch_b_, scratch_c_;
};

struct PropagationResult {
  WaveFunction state;
  double initial_norm_squared = 0.0;
  double final_norm_squared = 0.0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
};

/// Advances f by n_steps of dt under the advection generator.
///
/// `damping` must be v'/2 (it is what makes the generator anti-Hermitian);
/// it is checked against the spectral derivative of `speed` and the call is
/// refused when it disagrees. Each step applies exp(-i H dt) through a
/// Chebyshev expansion converged to roundoff, so norm and <H> are conserved.
///
/// Throws Refusal when dt * max|speed| >= spacing (stability contract), or
/// when the profiles do not match the grid; NumericalContractFailure when the
/// norm drifts by more than 1e-8.
PropagationResult propagate_advection(const WaveFunction& f, std::span<const double> speed,
                                      std::span<const double> phase, std::span<const double> damping,
                                      double dt, std::size_t n_steps);

/// Same, for a prebuilt generator.
PropagationResult propagate_advection(const WaveFunction& f, const AdvectionGenerator& generator, double dt,
                                      std::size_t n_steps);

}  // namespace closedweigh
