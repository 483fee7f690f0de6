#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "closedweigh/grid.hpp"
#include "closedweigh/profile.hpp"

namespace closedweigh {

/// Gaussian pointer state |phi(z)|^2 ~ N(center, width^2), tapered smoothly
/// to zero between 4 and 5 widths from the center. The taper keeps the
/// momentum distribution's moments finite; a hard cut would not.
struct PointerPacket {
  double center = 0.0;
  double width = 0.1;
  Grid1D grid;

  static constexpr double kTruncation = 5.0;

  /// Normalized samples on `grid`.
  WaveFunction wavefunction() const;
  /// z-grid spanning center +- 8 width.
  static Grid1D default_grid(double center, double width, std::size_t n_points = 1024);
};

/// Initial internal-clock state used by real-time evolution: a Gaussian in
/// tau (|psi|^2 standard deviation `width`) carrying total energy E0.
struct ClockPacket {
  double center = 0.0;
  double width = 0.0;
};

/// User-facing parameters of one internal energy measurement.
struct ScenarioParams {
  double box_energy = 0.0;    ///< E, eigenvalue of H_box
  double total_energy = 1.0;  ///< E0, eigenvalue of the full Hamiltonian
  double t_start = 0.0;
  double duration = 1.0;      ///< tau0
  ProfileShape shape = ProfileShape::raised_cosine;
  double pointer_center = 0.0;
  double pointer_width = 0.02;  ///< Delta z
  std::size_t tau_points = 1024;
  std::size_t z_points = 1024;
  double hbar = 1.0;

  bool operator==(const ScenarioParams&) const = default;
};

/// Clock + box + pointer with H = H_c + H_box + (g H_c + H_c g + 2 g H_box) z / 2
/// and no pointer self-Hamiltonian.
struct MeasurementScenario {
  double box_energy = 0.0;
  double total_energy = 1.0;
  CouplingProfile profile;
  PointerPacket pointer;
  ClockPacket clock;
  double hbar = 1.0;

  const Grid1D& tau_grid() const noexcept { return profile.grid(); }
  WaveFunction pointer_packet() const { return pointer.wavefunction(); }

  /// max |g(tau) z| over the pointer's effective support |z - center| <= 5 width.
  double max_abs_gz() const noexcept;

  /// Same scenario with both grids doubled (same spans).
  MeasurementScenario refined() const;
};

/// tau-grid of period 8 tau0 starting 3.5 tau0 before t_start. For n_points
/// divisible by 16 both support endpoints land on grid nodes.
Grid1D default_tau_grid(double t_start, double duration, std::size_t n_points = 1024);

/// Builds and validates a scenario. Throws SingularityError when
/// max|g z| >= 1 on the pointer support; ContractViolation for bad inputs.
MeasurementScenario make_scenario(const ScenarioParams& params);

/// Clock delay D(z) = integral g z / (1 + g z) d tau accumulated over the
/// whole profile: the exact characteristic shift of a clock wavepacket and
/// the phase E0 D(z) / hbar imprinted on the pointer.
double clock_delay(const CouplingProfile& profile, double z);

/// psi(tau) = (1+gz)^(-1/2) exp(-i E tau/hbar) exp(i (E0/hbar) s(tau)),
/// s(tau) = integral from the grid origin of d tau' / (1 + g z).
/// Not normalized. Throws SingularityError if 1 + g z <= 0 anywhere.
WaveFunction stationary_solution(const MeasurementScenario& scenario, double z);

/// max_tau |d psi/d tau - R(tau) psi| / max|psi| with
/// R = -(z g'/2)/(1+zg) - i E/hbar + i (E0/hbar)/(1+zg).
///
/// The derivative is spectral. The mean phase winding implied by the
/// scenario is removed first, so states whose phase does not close over one
/// grid period are still differentiated exactly.
double ode_residual(const WaveFunction& psi, const MeasurementScenario& scenario, double z);

/// Closed-form clock wavepacket at external time t for pointer value z: the
/// superposition of stationary solutions whose free-clock limit is the
/// scenario's ClockPacket. Independent reference for evolve_scenario.
WaveFunction stationary_wavepacket(const MeasurementScenario& scenario, double z, double t);

/// Initial clock state (identical for every z).
WaveFunction initial_clock_state(const MeasurementScenario& scenario);

/// Joint pointer-clock state after real-time evolution. z is a constant of
/// motion, so the state is a family of clock wavefunctions, one per z node
/// where the pointer amplitude is nonzero.
struct JointState {
  Grid1D z_grid;
  std::vector<std::size_t> active;       ///< z-grid indices with nonzero pointer amplitude
  std::vector<Complex> pointer;          ///< pointer amplitudes on the full z grid
  std::vector<WaveFunction> slices;      ///< clock state per active index
  double t_total = 0.0;
  double dt = 0.0;
  std::size_t n_steps = 0;
  double max_norm_drift = 0.0;           ///< max over slices of |final - initial| / initial norm
  double max_energy_drift = 0.0;         ///< max over slices of relative <H> drift
  double joint_norm_initial = 0.0;
  double joint_norm_final = 0.0;
  double joint_energy_initial = 0.0;
  double joint_energy_final = 0.0;
};

/// Time needed for the default clock packet to clear the profile support.
double completion_time(const MeasurementScenario& scenario);
/// Largest step allowed by the stability contract, with a 2x margin.
double default_time_step(const MeasurementScenario& scenario);

/// Real-time evolution of every active z slice with speed 1 + g z, damping
/// z g'/2 and phase E (1 + g z) / hbar. Refuses when t_total does not cover
/// the profile duration. dt is rounded down so n_steps * dt == t_total.
JointState evolve_scenario(const MeasurementScenario& scenario, double t_total, double dt, std::size_t threads = 1);

struct ReadoutReport {
  double mean_shift = 0.0;  ///< pointer momentum shift, sign chosen so the ideal value is +E0
  double bias = 0.0;        ///< mean_shift - E0
  double spread = 0.0;      ///< standard deviation of the readout distribution
  double pointer_dp = 0.0;  ///< intrinsic momentum spread of the initial pointer packet
  bool success = false;     ///< |bias| <= spread
  double duration_product = 0.0;  ///< tau0 * spread
  double max_abs_gz = 0.0;
  std::size_t z_points = 0;    ///< resolution actually used
  std::size_t tau_points = 0;
};

/// Readout from the exact stationary phases (production path). The z and tau
/// grids are doubled until mean and spread change by less than 1e-9 relative;
/// NumericalContractFailure if that does not happen within 6 doublings.
ReadoutReport pointer_readout(const MeasurementScenario& scenario);

/// Readout from an evolved joint state. Refuses if any slice still has
/// probability > 1e-10 at or before the end of the profile support.
ReadoutReport pointer_readout(const JointState& state, const MeasurementScenario& scenario);

/// Internal clock reading tau(t) = t + z * integral_{-inf}^{t} g.
double internal_clock_reading(double z, const CouplingProfile& profile, double t);

using SuccessRule = std::function<bool(const ReadoutReport&)>;
/// |bias| <= spread
bool default_success_rule(const ReadoutReport& report);

struct DurationSweepRecord {
  double duration = 0.0;       ///< tau0
  double pointer_width = 0.0;  ///< Delta z
  bool valid = false;          ///< false when the pointer support reaches |g z| >= 1
  bool success = false;        ///< false for invalid records
  double mean_shift = 0.0;
  double bias = 0.0;
  double spread = 0.0;         ///< readout spread, including nonlinear broadening
  double pointer_dp = 0.0;     ///< Delta E0: intrinsic pointer momentum spread (defined for invalid records too)
  double clock_spread = 0.0;   ///< Delta tau, spread of the post-measurement clock offset
  double duration_product = 0.0;    ///< tau0 * readout spread
  double resolution_product = 0.0;  ///< tau0 * Delta E0 (defined for invalid records too)
  double clock_product = 0.0;       ///< Delta tau * readout spread
  double max_abs_gz = 0.0;
  std::string note;
};

/// One record per (tau0, Delta z) pair in tau0-major order. Pairs may be
/// evaluated concurrently; the order of the result does not depend on it.
std::vector<DurationSweepRecord> duration_sweep(const ScenarioParams& base, const std::vector<double>& durations,
                                                const std::vector<double>& pointer_widths,
                                                const SuccessRule& rule = default_success_rule,
                                                std::size_t threads = 1);

/// Evaluates a single sweep point.
DurationSweepRecord evaluate_duration_point(const ScenarioParams& params, const SuccessRule& rule = default_success_rule);

}  // namespace closedweigh
