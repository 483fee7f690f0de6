#include "closedweigh/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "closedweigh/errors.hpp"

namespace closedweigh {

AdvectionGenerator::AdvectionGenerator(const Grid1D& grid, std::vector<double> speed, std::vector<double> phase)
    : derivative_(grid), speed_(std::move(speed)), phase_(std::move(phase)) {
  if (speed_.size() != grid.size() || phase_.size() != grid.size()) {
    throw Refusal("AdvectionGenerator: speed/phase profiles must have one value per grid point");
  }
  double max_phase = 0.0;
  for (std::size_t j = 0; j < speed_.size(); ++j) {
    if (!std::isfinite(speed_[j]) || !std::isfinite(phase_[j])) throw Refusal("AdvectionGenerator: non-finite profile");
    max_speed_ = std::max(max_speed_, std::abs(speed_[j]));
    max_phase = std::max(max_phase, std::abs(phase_[j]));
  }
  const auto k = wavenumbers(grid, true);
  double kmax = 0.0;
  for (double v : k) kmax = std::max(kmax, std::abs(v));
  bound_ = max_speed_ * kmax + max_phase;
  scratch_a_.resize(grid.size());
  scratch_b_.resize(grid.size());
  scratch_c_.resize(grid.size());
}

void AdvectionGenerator::apply_hamiltonian(std::span<const Complex> in, std::span<Complex> out) const {
  // H psi = i A psi = -(i/2)(v D psi + D(v psi)) + w psi
  const std::size_t n = speed_.size();
  derivative_.apply(in, scratch_a_, scratch_c_);  // D psi
  for (std::size_t j = 0; j < n; ++j) scratch_b_[j] = speed_[j] * in[j];
  derivative_.apply(scratch_b_, scratch_b_, scratch_c_);  // D (v psi)
  const Complex half_i(0.0, 0.5);
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = -half_i * (speed_[j] * scratch_a_[j] + scratch_b_[j]) + phase_[j] * in[j];
  }
}

double AdvectionGenerator::expectation(const WaveFunction& psi) const {
  std::vector<Complex> h(psi.size());
  apply_hamiltonian(psi.amplitudes(), h);
  return psi.inner(WaveFunction(psi.grid(), std::move(h))).real() / psi.norm_squared();
}

namespace {

// Coefficients of exp(-i H dt) = sum_n c_n T_n(H / rho).
std::vector<Complex> chebyshev_coefficients(double a) {
  std::vector<Complex> c;
  const Complex minus_i(0.0, -1.0);
  Complex phase(1.0, 0.0);
  for (unsigned n = 0;; ++n) {
    const double j = a == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::cyl_bessel_j(static_cast<double>(n), a);
    c.push_back((n == 0 ? 1.0 : 2.0) * phase * j);
    phase *= minus_i;
    if (static_cast<double>(n) > a && std::abs(j) < 1e-18) break;
  }
  return c;
}

}  // namespace

PropagationResult propagate_advection(const WaveFunction& f, const AdvectionGenerator& generator, double dt,
                                      std::size_t n_steps) {
  if (!(generator.grid() == f.grid())) throw Refusal("propagate_advection: generator and wavefunction grids differ");
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw Refusal("propagate_advection: dt must be finite and >= 0");
  const double spacing = f.grid().spacing();
  if (dt * generator.max_speed() >= spacing) {
    std::ostringstream msg;
    msg << "propagate_advection: stability contract dt*max|speed| < spacing violated (dt=" << dt
        << ", max|speed|=" << generator.max_speed() << ", spacing=" << spacing << ")";
    throw Refusal(msg.str());
  }

  const std::size_t n = f.size();
  const double rho = 1.01 * generator.spectral_bound() + 1e-300;
  const auto coeff = chebyshev_coefficients(rho * dt);
  const double inv_rho = 1.0 / rho;

  std::vector<Complex> psi(f.amplitudes().begin(), f.amplitudes().end());
  std::vector<Complex> prev(n), cur(n), next(n), acc(n);

  PropagationResult result{f, f.norm_squared(), 0.0, generator.expectation(f), 0.0};

  for (std::size_t step = 0; step < n_steps; ++step) {
    prev = psi;
    generator.apply_hamiltonian(prev, cur);
    for (std::size_t j = 0; j < n; ++j) {
      cur[j] *= inv_rho;
      acc[j] = coeff[0] * prev[j] + coeff[1] * cur[j];
    }
    for (std::size_t m = 2; m < coeff.size(); ++m) {
      generator.apply_hamiltonian(cur, next);
      for (std::size_t j = 0; j < n; ++j) {
        next[j] = 2.0 * inv_rho * next[j] - prev[j];
        acc[j] += coeff[m] * next[j];
      }
      std::swap(prev, cur);
      std::swap(cur, next);
    }
    psi.swap(acc);
  }

  result.state = WaveFunction(f.grid(), std::move(psi));
  result.final_norm_squared = result.state.norm_squared();
  result.final_energy = n_steps == 0 ? result.initial_energy : generator.expectation(result.state);
  const double initial_norm = std::sqrt(result.initial_norm_squared);
  const double final_norm = std::sqrt(result.final_norm_squared);
  if (std::abs(final_norm - initial_norm) > 1e-8 * std::max(initial_norm, 1e-300)) {
    std::ostringstream msg;
    msg << "propagate_advection: norm drift " << final_norm - initial_norm << " exceeds 1e-8";
    throw NumericalContractFailure(msg.str());
  }
  return result;
}

PropagationResult propagate_advection(const WaveFunction& f, std::span<const double> speed,
                                      std::span<const double> phase, std::span<const double> damping, double dt,
                                      std::size_t n_steps) {
  const Grid1D& grid = f.grid();
  if (speed.size() != grid.size() || phase.size() != grid.size() || damping.size() != grid.size()) {
    throw Refusal("propagate_advection: profiles must have one value per grid point");
  }

  // The generator is anti-Hermitian only when damping == speed'/2.
  std::vector<Complex> v(speed.begin(), speed.end());
  const auto dv = spectral_derivative(WaveFunction(grid, std::move(v)));
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double half = 0.5 * dv[j].real();
    err2 += (damping[j] - half) * (damping[j] - half);
    ref2 += half * half;
  }
  const double rms_err = std::sqrt(err2 / static_cast<double>(grid.size()));
  const double rms_ref = std::sqrt(ref2 / static_cast<double>(grid.size()));
  if (rms_err > 1e-2 * rms_ref + 1e-10) {
    std::ostringstream msg;
    msg << "propagate_advection: damping must equal half the derivative of speed (rms mismatch " << rms_err << ")";
    throw Refusal(msg.str());
  }

  AdvectionGenerator gen(grid, std::vector<double>(speed.begin(), speed.end()),
                         std::vector<double>(phase.begin(), phase.end()));
  return propagate_advection(f, gen, dt, n_steps);
}

}  // namespace closedweigh
