#include "closedweigh/disc.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "closedweigh/errors.hpp"
#include "closedweigh/parallel.hpp"
#include "closedweigh/random.hpp"

namespace closedweigh::disc {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvariantViolation(std::string(name) + " > 0 required");
  }
}

double sample_stddev(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

void DiscExperiment::validate() const {
  require_positive(I, "I");
  require_positive(omega, "omega");
  require_positive(m, "m");
  require_positive(r, "r");
  require_positive(T, "T");
  require_positive(hbar, "hbar");
  if (m * r * r / I > 1e-3) throw InvariantViolation("m << M enforced as m r^2/I <= 1e-3");
}

BackReaction back_reaction_spread(const DiscExperiment& exp, double dr) {
  exp.validate();
  if (!(dr >= 0.0)) throw ContractViolation("back_reaction_spread: dr must be non-negative");
  BackReaction out;
  out.d_omega = 2.0 * exp.m * exp.omega * exp.r * dr / exp.I;
  out.d_theta = exp.T * out.d_omega;
  return out;
}

double resolvable_accuracy(const DiscExperiment& exp, double dp) {
  exp.validate();
  if (!(dp >= 0.0)) throw ContractViolation("resolvable_accuracy: dp must be non-negative");
  return exp.I * dp / (2.0 * exp.m * exp.omega * exp.r * exp.T);
}

AngularReport angular_product(const DiscExperiment& exp, double dr, double dp) {
  if (!(dr > 0.0) || !(dp > 0.0)) throw ContractViolation("angular_product: dr and dp must be positive");
  AngularReport out;
  out.d_theta = back_reaction_spread(exp, dr).d_theta;
  out.d_L = resolvable_accuracy(exp, dp);
  out.product = out.d_theta * out.d_L;
  const double reduced = dr * dp;
  if (std::abs(out.product - reduced) > 1e-12 * reduced) {
    throw NumericalContractFailure("angular_product: d_theta d_L does not reduce to dr dp");
  }
  return out;
}

DiscStatistics monte_carlo_disc(const DiscExperiment& exp, double dr, std::size_t n_samples, std::uint64_t seed,
                                std::size_t threads) {
  exp.validate();
  if (n_samples < 1000) throw ContractViolation("monte_carlo_disc: n_samples >= 1000 required");
  if (!(dr > 0.0)) throw ContractViolation("monte_carlo_disc: dr must be positive");

  // Deviations from the nominal values; forming L / inertia directly loses
  // the tiny relative change to rounding.
  std::vector<double> omegas(n_samples), thetas(n_samples), rs(n_samples), ps(n_samples);

  parallel_for(n_samples, threads, [&](std::size_t i) {
    auto engine = stream_engine(seed, i);
    std::normal_distribution<double> radius(0.0, dr);
    std::normal_distribution<double> momentum(0.0, exp.hbar / (2.0 * dr));
    const double offset = radius(engine);
    const double p0 = momentum(engine);
    const double d_inertia = exp.m * offset * (2.0 * exp.r + offset);
    omegas[i] = -exp.omega * d_inertia / (exp.I + d_inertia);
    thetas[i] = omegas[i] * exp.T;
    rs[i] = offset;
    ps[i] = p0;
  });

  DiscStatistics out;
  out.samples = n_samples;
  out.omega_spread = sample_stddev(omegas);
  out.theta_spread = sample_stddev(thetas);
  out.sampled_dr = sample_stddev(rs);
  out.sampled_dp = sample_stddev(ps);
  out.d_L = resolvable_accuracy(exp, out.sampled_dp);
  out.product = out.theta_spread * out.d_L;
  return out;
}

}  // namespace closedweigh::disc
