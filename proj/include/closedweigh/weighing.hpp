#pragma once

#include <cstddef>
#include <cstdint>

namespace closedweigh::weighing {

/// Big shell of mass M and radius R weighed from inside by tossing a light
/// test shell of mass m outward at speed v0. Gravity over the excursion is the
/// constant surface field G M / R^2.
struct ShellExperiment {
  double M = 1.0;   ///< shell mass
  double R = 1.0;   ///< shell radius
  double m = 1e-3;  ///< test-shell mass
  double v0 = 0.0;  ///< initial outward speed
  double G = 1.0;
  double c = 1.0;
  double hbar = 1.0;

  /// Apex height v0^2 R^2 / (2 G M).
  double apex_height() const noexcept;
  /// Surface acceleration G M / R^2.
  double surface_gravity() const noexcept;

  /// Throws InvariantViolation naming the first violated invariant:
  /// positivity, m/M <= 1e-3, z_max/R <= 1e-2, G M/(R c^2) <= 1e-3.
  void validate() const;

  bool operator==(const ShellExperiment&) const = default;
};

/// Classical return time 2 R^2 v0 / (G M).
double return_time(const ShellExperiment& exp);

/// Mass inferred from an observed return time: 2 R^2 v0 / (G tau_obs).
/// Throws ContractViolation unless tau_obs > 0.
double infer_mass(double tau_obs, const ShellExperiment& exp);

/// Clock-time uncertainty tau * (G m / R^2) * (dz / c^2) caused by a test-shell
/// height uncertainty dz.
double dilation_spread(const ShellExperiment& exp, double dz, double tau);

/// Impulse difference (G m dM / R^2) tau produced by a mass difference dM.
double impulse_threshold(const ShellExperiment& exp, double dM, double tau);

/// Smallest resolvable mass difference: the dM whose impulse equals dp.
double threshold_mass(const ShellExperiment& exp, double dp, double tau);

/// dtau * dM * c^2 with dtau from dilation_spread and dM from threshold_mass.
/// The product reduces to dz * dp; the reduction is checked to 1e-12 relative
/// (NumericalContractFailure otherwise). Requires dz, dp > 0.
double product_identity(const ShellExperiment& exp, double dz, double dp, double tau);

/// Minimum-uncertainty initial offsets of the test shell.
struct PhaseSample {
  double z0 = 0.0;  ///< height offset
  double p0 = 0.0;  ///< radial momentum offset
  double weight = 1.0;
};

/// Draws sample `index` of the stream identified by `seed`: independent
/// Gaussians with spreads dz and hbar / (2 dz).
PhaseSample draw_phase_sample(double dz, double hbar, std::uint64_t seed, std::uint64_t index);

struct WeighingStatistics {
  std::size_t samples = 0;
  double mean_return_time = 0.0;
  double mean_mass = 0.0;
  double mass_spread = 0.0;    ///< std of inferred mass
  double clock_spread = 0.0;   ///< std of accumulated clock dilation
  double product = 0.0;        ///< clock_spread * mass_spread * c^2
  double sampled_dz = 0.0;     ///< std of the drawn z0
  double sampled_dp = 0.0;     ///< std of the drawn p0
};

/// Per sample: flight z(t) = z0 + (v0 + p0/m) t - g t^2 / 2 back to z = 0,
/// mass inferred from the return time with the nominal v0, clock dilation
/// (G m / (R^2 c^2)) * integral z dt over the flight. Deterministic for a
/// given seed at any thread count. Requires n_samples >= 1000 and a valid
/// experiment; samples that never return are a ContractViolation.
WeighingStatistics monte_carlo_weighing(const ShellExperiment& exp, double dz, std::size_t n_samples,
                                        std::uint64_t seed, std::size_t threads = 1);

}  // namespace closedweigh::weighing
