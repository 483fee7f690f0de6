#include "closedweigh/weighing.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "closedweigh/errors.hpp"
#include "closedweigh/parallel.hpp"
#include "closedweigh/random.hpp"

namespace closedweigh::weighing {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvariantViolation(std::string(name) + " > 0 required");
  }
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

double ShellExperiment::apex_height() const noexcept { return v0 * v0 * R * R / (2.0 * G * M); }

double ShellExperiment::surface_gravity() const noexcept { return G * M / (R * R); }

void ShellExperiment::validate() const {
  require_positive(M, "M");
  require_positive(R, "R");
  require_positive(m, "m");
  require_positive(v0, "v0");
  require_positive(G, "G");
  require_positive(c, "c");
  require_positive(hbar, "hbar");
  if (m / M > 1e-3) throw InvariantViolation("m << M enforced as m/M <= 1e-3");
  if (apex_height() / R > 1e-2) throw InvariantViolation("z << R enforced as z_max/R <= 1e-2");
  if (G * M / (R * c * c) > 1e-3) throw InvariantViolation("weak field enforced as GM/(R c^2) <= 1e-3");
}

double return_time(const ShellExperiment& exp) {
  exp.validate();
  return 2.0 * exp.R * exp.R * exp.v0 / (exp.G * exp.M);
}

double infer_mass(double tau_obs, const ShellExperiment& exp) {
  if (!(tau_obs > 0.0)) throw ContractViolation("infer_mass: observed return time must be positive");
  exp.validate();
  return 2.0 * exp.R * exp.R * exp.v0 / (exp.G * tau_obs);
}

double dilation_spread(const ShellExperiment& exp, double dz, double tau) {
  exp.validate();
  if (!(dz >= 0.0) || !(tau >= 0.0)) throw ContractViolation("dilation_spread: dz and tau must be non-negative");
  return tau * (exp.G * exp.m / (exp.R * exp.R)) * dz / (exp.c * exp.c);
}

double impulse_threshold(const ShellExperiment& exp, double dM, double tau) {
  exp.validate();
  if (!(tau >= 0.0)) throw ContractViolation("impulse_threshold: tau must be non-negative");
  return exp.G * exp.m * dM / (exp.R * exp.R) * tau;
}

double threshold_mass(const ShellExperiment& exp, double dp, double tau) {
  exp.validate();
  if (!(tau > 0.0)) throw ContractViolation("threshold_mass: tau must be positive");
  if (!(dp >= 0.0)) throw ContractViolation("threshold_mass: dp must be non-negative");
  return dp * exp.R * exp.R / (exp.G * exp.m * tau);
}

double product_identity(const ShellExperiment& exp, double dz, double dp, double tau) {
  if (!(dz > 0.0) || !(dp > 0.0)) throw ContractViolation("product_identity: dz and dp must be positive");
  const double product = dilation_spread(exp, dz, tau) * threshold_mass(exp, dp, tau) * exp.c * exp.c;
  const double reduced = dz * dp;
  if (std::abs(product - reduced) > 1e-12 * reduced) {
    throw NumericalContractFailure("product_identity: dtau dM c^2 does not reduce to dz dp");
  }
  return product;
}

PhaseSample draw_phase_sample(double dz, double hbar, std::uint64_t seed, std::uint64_t index) {
  if (!(dz > 0.0) || !(hbar > 0.0)) throw ContractViolation("draw_phase_sample: dz and hbar must be positive");
  auto engine = stream_engine(seed, index);
  std::normal_distribution<double> height(0.0, dz);
  std::normal_distribution<double> momentum(0.0, hbar / (2.0 * dz));
  PhaseSample s;
  s.z0 = height(engine);
  s.p0 = momentum(engine);
  return s;
}

WeighingStatistics monte_carlo_weighing(const ShellExperiment& exp, double dz, std::size_t n_samples,
                                        std::uint64_t seed, std::size_t threads) {
  exp.validate();
  if (n_samples < 1000) throw ContractViolation("monte_carlo_weighing: n_samples >= 1000 required");
  if (!(dz > 0.0)) throw ContractViolation("monte_carlo_weighing: dz must be positive");

  const double a = exp.surface_gravity();
  const double dilation_rate = exp.G * exp.m / (exp.R * exp.R * exp.c * exp.c);
  std::vector<double> times(n_samples), masses(n_samples), dilations(n_samples), zs(n_samples), ps(n_samples);

  parallel_for(n_samples, threads, [&](std::size_t i) {
    const PhaseSample s = draw_phase_sample(dz, exp.hbar, seed, i);
    const double v = exp.v0 + s.p0 / exp.m;
    const double disc = v * v + 2.0 * a * s.z0;
    if (disc < 0.0) throw ContractViolation("monte_carlo_weighing: sampled test shell never returns");
    const double t = (v + std::sqrt(disc)) / a;
    if (!(t > 0.0)) throw ContractViolation("monte_carlo_weighing: sampled test shell never returns");
    const double z_integral = s.z0 * t + 0.5 * v * t * t - a * t * t * t / 6.0;
    times[i] = t;
    masses[i] = 2.0 * exp.R * exp.R * exp.v0 / (exp.G * t);
    dilations[i] = dilation_rate * z_integral;
    zs[i] = s.z0;
    ps[i] = s.p0;
  });

  WeighingStatistics out;
  out.samples = n_samples;
  out.mean_return_time = moments(times).mean;
  const Moments mass = moments(masses);
  out.mean_mass = mass.mean;
  out.mass_spread = mass.stddev;
  out.clock_spread = moments(dilations).stddev;
  out.product = out.clock_spread * out.mass_spread * exp.c * exp.c;
  out.sampled_dz = moments(zs).stddev;
  out.sampled_dp = moments(ps).stddev;
  return out;
}

}  // namespace closedweigh::weighing
