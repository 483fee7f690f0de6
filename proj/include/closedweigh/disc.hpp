#pragma once

#include <cstddef>
#include <cstdint>

namespace closedweigh::disc {

/// Rigid disc of inertia I spinning at omega, with a test particle of mass m
/// free to slide along a co-rotating radial track at radius r. The particle's
/// centrifugal acceleration over a time T is the angular-momentum readout.
struct DiscExperiment {
  double I = 1.0;      ///< total moment of inertia at the nominal radius
  double omega = 1.0;
  double m = 1e-6;
  double r = 1.0;
  double T = 1.0;
  double hbar = 1.0;

  double angular_momentum() const noexcept { return I * omega; }

  /// Throws InvariantViolation: all positive, m r^2 / I <= 1e-3.
  void validate() const;

  bool operator==(const DiscExperiment&) const = default;
};

struct BackReaction {
  double d_omega = 0.0;
  double d_theta = 0.0;
};

struct AngularReport {
  double d_theta = 0.0;
  double d_L = 0.0;
  double product = 0.0;
};

/// d_omega = 2 m omega r dr / I from L conservation, d_theta = T d_omega.
BackReaction back_reaction_spread(const DiscExperiment& exp, double dr);

/// Angular-momentum accuracy I dp / (2 m omega r T) reachable when the
/// particle's momentum is known to dp.
double resolvable_accuracy(const DiscExperiment& exp, double dp);

/// d_theta * d_L, which reduces to dr * dp (checked to 1e-12 relative,
/// NumericalContractFailure otherwise). Requires dr, dp > 0.
AngularReport angular_product(const DiscExperiment& exp, double dr, double dp);

struct DiscStatistics {
  std::size_t samples = 0;
  double omega_spread = 0.0;  ///< std of the conserved-L angular velocity
  double theta_spread = 0.0;  ///< std of theta(T)
  double d_L = 0.0;           ///< resolvable accuracy at the sampled momentum spread
  double product = 0.0;       ///< theta_spread * d_L
  double sampled_dr = 0.0;
  double sampled_dp = 0.0;
};

/// Per sample: r0 ~ N(r, dr), p0 ~ N(0, hbar / (2 dr)); the disc's inertia
/// becomes I + m (r0^2 - r^2), omega = L / inertia from exact conservation and
/// theta(T) = omega T with the particle held at r0 over the run.
/// Requires n_samples >= 1000. Deterministic for a given seed.
DiscStatistics monte_carlo_disc(const DiscExperiment& exp, double dr, std::size_t n_samples, std::uint64_t seed,
                                std::size_t threads = 1);

}  // namespace closedweigh::disc
