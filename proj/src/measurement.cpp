#include "closedweigh/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "closedweigh/errors.hpp"
#include "closedweigh/parallel.hpp"
#include "closedweigh/propagation.hpp"
#include "closedweigh/quadrature.hpp"
#include "closedweigh/spectral.hpp"

namespace closedweigh {

namespace {

constexpr double kConvergenceTolerance = 1e-9;
constexpr int kMaxRefinements = 6;
constexpr double kCompletionTolerance = 1e-10;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ContractViolation(std::string(what) + " must be finite");
}

void require_regular(const CouplingProfile& profile, double z) {
  if (1.0 + profile.peak() * std::min(z, 0.0) <= 0.0) {
    std::ostringstream msg;
    msg << "1 + g(tau) z <= 0 for z = " << z << " (peak g = " << profile.peak() << ")";
    throw SingularityError(msg.str());
  }
}

// Nonzero samples of g, kept so repeated delay evaluations skip the empty part of the grid.
struct SupportSamples {
  std::vector<double> g;
  double spacing;

  explicit SupportSamples(const CouplingProfile& profile) : spacing(profile.grid().spacing()) {
    for (double v : profile.samples())
      if (v != 0.0) g.push_back(v);
  }

  double delay(double z) const {
    double s = 0.0;
    for (double v : g) s += v * z / (1.0 + v * z);
    return s * spacing;
  }
};

std::vector<double> delay_integrand(const CouplingProfile& profile, double z) {
  const auto& g = profile.samples();
  std::vector<double> h(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) h[j] = g[j] * z / (1.0 + g[j] * z);
  return h;
}

double weighted_momentum_moments(std::span<const double> weights, std::span<const double> p, double& stddev) {
  double w = 0.0, m = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    w += weights[k];
    m += weights[k] * p[k];
  }
  m /= w;
  double v = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) v += weights[k] * (p[k] - m) * (p[k] - m);
  stddev = std::sqrt(v / w);
  return m;
}

ReadoutReport finish_report(double mean_shift, double spread, double pointer_dp, const MeasurementScenario& s) {
  ReadoutReport r;
  r.mean_shift = mean_shift;
  r.bias = mean_shift - s.total_energy;
  r.spread = spread;
  r.pointer_dp = pointer_dp;
  r.success = default_success_rule(r);
  r.duration_product = s.profile.duration() * spread;
  r.max_abs_gz = s.max_abs_gz();
  r.z_points = s.pointer.grid.size();
  r.tau_points = s.tau_grid().size();
  return r;
}

ReadoutReport stationary_readout_at(const MeasurementScenario& s) {
  const WaveFunction phi = s.pointer_packet();
  const Spectrum initial = to_conjugate(phi, s.hbar);
  const SupportSamples support(s.profile);
  const Grid1D& zg = s.pointer.grid;
  std::vector<Complex> chi(zg.size());
  for (std::size_t j = 0; j < zg.size(); ++j) {
    if (phi[j] == Complex{}) continue;
    const double z = zg.point(j);
    require_regular(s.profile, z);
    chi[j] = phi[j] * std::polar(1.0, -s.total_energy * support.delay(z) / s.hbar);
  }
  const Spectrum fin = to_conjugate(WaveFunction(zg, std::move(chi)), s.hbar);
  return finish_report(-(fin.mean() - initial.mean()), fin.stddev(), initial.stddev(), s);
}

}  // namespace

namespace {

// C-infinity step from 0 (x <= 0) to 1 (x >= 1).
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

WaveFunction PointerPacket::wavefunction() const {
  auto psi = WaveFunction::sample(grid, [this](double z) {
    const double u = std::abs(z - center) / width;
    if (u >= kTruncation) return Complex{};
    const double window = 1.0 - smooth_step(u - (kTruncation - 1.0));
    return Complex(std::exp(-u * u / 4.0) * window, 0.0);
  });
  return psi.normalized();
}

Grid1D PointerPacket::default_grid(double center, double width, std::size_t n_points) {
  return Grid1D(n_points, center - 8.0 * width, 16.0 * width);
}

double MeasurementScenario::max_abs_gz() const noexcept {
  const double reach = PointerPacket::kTruncation * pointer.width;
  const double zmax = std::max(std::abs(pointer.center - reach), std::abs(pointer.center + reach));
  return profile.peak() * zmax;
}

MeasurementScenario MeasurementScenario::refined() const {
  MeasurementScenario r = *this;
  r.profile = profile.resampled(profile.grid().refined());
  r.pointer.grid = pointer.grid.refined();
  return r;
}

Grid1D default_tau_grid(double t_start, double duration, std::size_t n_points) {
  return Grid1D(n_points, t_start - 3.5 * duration, 8.0 * duration);
}

MeasurementScenario make_scenario(const ScenarioParams& p) {
  require_finite(p.box_energy, "box_energy");
  require_finite(p.total_energy, "total_energy");
  require_finite(p.pointer_center, "pointer_center");
  if (!(p.hbar > 0.0) || !std::isfinite(p.hbar)) throw ContractViolation("hbar must be finite and > 0");
  if (!(p.pointer_width > 0.0) || !std::isfinite(p.pointer_width)) {
    throw ContractViolation("pointer_width must be finite and > 0");
  }
  const Grid1D tau_grid = default_tau_grid(p.t_start, p.duration, p.tau_points);
  MeasurementScenario s{p.box_energy,
                        p.total_energy,
                        make_profile(p.t_start, p.duration, p.shape, tau_grid),
                        PointerPacket{p.pointer_center, p.pointer_width,
                                      PointerPacket::default_grid(p.pointer_center, p.pointer_width, p.z_points)},
                        ClockPacket{p.t_start - 1.5 * p.duration, p.duration / 8.0},
                        p.hbar};
  if (s.max_abs_gz() >= 1.0) {
    std::ostringstream msg;
    msg << "pointer support reaches |g z| = " << s.max_abs_gz() << " >= 1 (1 + g z must stay positive)";
    throw SingularityError(msg.str());
  }
  return s;
}

double clock_delay(const CouplingProfile& profile, double z) {
  require_regular(profile, z);
  return SupportSamples(profile).delay(z);
}

WaveFunction stationary_solution(const MeasurementScenario& s, double z) {
  require_regular(s.profile, z);
  const Grid1D& grid = s.tau_grid();
  const auto inner = running_integral(delay_integrand(s.profile, z), grid);
  const auto& g = s.profile.samples();
  std::vector<Complex> psi(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tau = grid.point(j);
    const double elapsed = tau - inner[j];  // integral of 1/(1+gz), referenced so that z = 0 gives tau
    const double amp = 1.0 / std::sqrt(1.0 + g[j] * z);
    psi[j] = amp * std::polar(1.0, (s.total_energy * elapsed - s.box_energy * tau) / s.hbar);
  }
  return WaveFunction(grid, std::move(psi));
}

double ode_residual(const WaveFunction& psi, const MeasurementScenario& s, double z) {
  const Grid1D& grid = s.tau_grid();
  if (!(psi.grid() == grid)) throw ContractViolation("ode_residual: wavefunction is not on the scenario tau grid");
  require_regular(s.profile, z);

  const double period = grid.length();
  const double winding =
      (s.total_energy * (period - quadrature(delay_integrand(s.profile, z), grid)) - s.box_energy * period) /
      (s.hbar * period);

  const std::size_t n = grid.size();
  std::vector<Complex> u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = psi[j] * std::polar(1.0, -winding * (grid.point(j) - grid.origin()));
  const WaveFunction du = spectral_derivative(WaveFunction(grid, std::move(u)));

  const auto& g = s.profile.samples();
  const auto& dg = s.profile.derivative_samples();
  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex carrier = std::polar(1.0, winding * (grid.point(j) - grid.origin()));
    const Complex u_j = psi[j] / carrier;
    const Complex dpsi = carrier * (du[j] + i * winding * u_j);
    const double c = 1.0 + z * g[j];
    const Complex rhs = (-0.5 * z * dg[j] / c - i * s.box_energy / s.hbar + i * (s.total_energy / s.hbar) / c) * psi[j];
    worst = std::max(worst, std::abs(dpsi - rhs));
  }
  return worst / psi.max_abs();
}

WaveFunction initial_clock_state(const MeasurementScenario& s) {
  const double c = s.clock.center, w = s.clock.width;
  return WaveFunction::sample(s.tau_grid(),
                              [&](double tau) {
                                const double d = tau - c;
                                return std::exp(-d * d / (4.0 * w * w)) *
                                       std::polar(1.0, (s.total_energy * d - s.box_energy * tau) / s.hbar);
                              })
      .normalized();
}

WaveFunction stationary_wavepacket(const MeasurementScenario& s, double z, double t) {
  require_regular(s.profile, z);
  const Grid1D& grid = s.tau_grid();
  const auto inner = running_integral(delay_integrand(s.profile, z), grid);
  const auto& g = s.profile.samples();
  const double c = s.clock.center, w = s.clock.width;
  std::vector<Complex> psi(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double tau = grid.point(j);
    const double d = tau - inner[j] - t - c;
    psi[j] = std::exp(-d * d / (4.0 * w * w)) / std::sqrt(1.0 + g[j] * z) *
             std::polar(1.0, (s.total_energy * d - s.box_energy * tau) / s.hbar);
  }
  return WaveFunction(grid, std::move(psi)).normalized();
}

double completion_time(const MeasurementScenario& s) {
  const WaveFunction phi = s.pointer_packet();
  double zmin = s.pointer.center;
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (phi[j] != Complex{}) zmin = std::min(zmin, s.pointer.grid.point(j));
  // D(z) is increasing in z, so the most delayed slice is the smallest z.
  const double lag = std::max(0.0, -clock_delay(s.profile, zmin));
  return (s.profile.t_end() - s.clock.center) + 7.0 * s.clock.width + lag;
}

double default_time_step(const MeasurementScenario& s) {
  const WaveFunction phi = s.pointer_packet();
  double zmax = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (phi[j] != Complex{}) zmax = std::max(zmax, s.pointer.grid.point(j));
  return 0.5 * s.tau_grid().spacing() / (1.0 + s.profile.peak() * zmax);
}

JointState evolve_scenario(const MeasurementScenario& s, double t_total, double dt, std::size_t threads) {
  if (!(t_total >= s.profile.duration())) {
    throw Refusal("evolve_scenario: t_total must cover the full profile duration");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Refusal("evolve_scenario: dt must be finite and > 0");
  const auto n_steps = static_cast<std::size_t>(std::ceil(t_total / dt * (1.0 - 1e-12)));
  const double step = t_total / static_cast<double>(n_steps);

  const WaveFunction phi = s.pointer_packet();
  const WaveFunction psi0 = initial_clock_state(s);

  JointState state{s.pointer.grid, {}, std::vector<Complex>(phi.amplitudes().begin(), phi.amplitudes().end()),
                   {}, t_total, step, n_steps};
  for (std::size_t j = 0; j < phi.size(); ++j)
    if (phi[j] != Complex{}) state.active.push_back(j);

  const auto& g = s.profile.samples();
  const auto& dg = s.profile.derivative_samples();
  const std::size_t n = g.size();
  std::vector<PropagationResult> results(state.active.size(), PropagationResult{psi0});

  parallel_for(state.active.size(), threads, [&](std::size_t a) {
    const double z = state.z_grid.point(state.active[a]);
    require_regular(s.profile, z);
    std::vector<double> speed(n), phase(n), damping(n);
    for (std::size_t j = 0; j < n; ++j) {
      speed[j] = 1.0 + g[j] * z;
      phase[j] = s.box_energy * speed[j] / s.hbar;
      damping[j] = 0.5 * z * dg[j];
    }
    results[a] = propagate_advection(psi0, speed, phase, damping, step, n_steps);
  });

  const double dz = state.z_grid.spacing();
  state.slices.reserve(results.size());
  for (std::size_t a = 0; a < results.size(); ++a) {
    const auto& r = results[a];
    const double w = std::norm(state.pointer[state.active[a]]) * dz;
    const double n0 = std::sqrt(r.initial_norm_squared), n1 = std::sqrt(r.final_norm_squared);
    state.max_norm_drift = std::max(state.max_norm_drift, std::abs(n1 - n0) / n0);
    state.max_energy_drift = std::max(state.max_energy_drift, std::abs(r.final_energy - r.initial_energy) /
                                                                  std::max(std::abs(r.initial_energy), 1e-300));
    state.joint_norm_initial += w * r.initial_norm_squared;
    state.joint_norm_final += w * r.final_norm_squared;
    state.joint_energy_initial += w * r.initial_energy * r.initial_norm_squared;
    state.joint_energy_final += w * r.final_energy * r.final_norm_squared;
    state.slices.push_back(r.state);
  }
  return state;
}

ReadoutReport pointer_readout(const MeasurementScenario& scenario) {
  MeasurementScenario current = scenario;
  ReadoutReport coarse = stationary_readout_at(current);
  for (int level = 0; level < kMaxRefinements; ++level) {
    MeasurementScenario finer = current.refined();
    ReadoutReport fine = stationary_readout_at(finer);
    const double scale = std::max({std::abs(scenario.total_energy), fine.spread, fine.pointer_dp});
    if (std::abs(fine.mean_shift - coarse.mean_shift) <= kConvergenceTolerance * scale &&
        std::abs(fine.spread - coarse.spread) <= kConvergenceTolerance * scale) {
      return fine;
    }
    current = std::move(finer);
    coarse = fine;
  }
  std::ostringstream msg;
  msg << "pointer_readout: readout did not converge after " << kMaxRefinements << " grid doublings";
  throw NumericalContractFailure(msg.str());
}

ReadoutReport pointer_readout(const JointState& state, const MeasurementScenario& s) {
  if (state.slices.empty()) throw ContractViolation("pointer_readout: joint state has no slices");
  const Grid1D& tg = state.slices.front().grid();
  const double t_end = s.profile.t_end();
  for (const auto& slice : state.slices) {
    double before = 0.0;
    for (std::size_t m = 0; m < tg.size() && tg.point(m) <= t_end; ++m) before += std::norm(slice[m]);
    before *= tg.spacing() / slice.norm_squared();
    if (before > kCompletionTolerance) {
      std::ostringstream msg;
      msg << "pointer_readout: measurement incomplete, clock probability " << before
          << " remains at or before the end of the coupling";
      throw Refusal(msg.str());
    }
  }

  const Grid1D& zg = state.z_grid;
  const std::size_t nz = zg.size();
  Fft fft(nz);
  std::vector<Complex> column(nz), transformed(nz);
  std::vector<double> weights(nz, 0.0);
  for (std::size_t m = 0; m < tg.size(); ++m) {
    std::fill(column.begin(), column.end(), Complex{});
    for (std::size_t a = 0; a < state.active.size(); ++a) {
      const std::size_t j = state.active[a];
      column[j] = state.pointer[j] * state.slices[a][m];
    }
    fft.forward(column, transformed);
    for (std::size_t k = 0; k < nz; ++k) weights[k] += std::norm(transformed[k]);
  }
  auto p = wavenumbers(zg, false);
  for (auto& v : p) v *= s.hbar;
  double spread = 0.0;
  const double mean = weighted_momentum_moments(weights, p, spread);
  const Spectrum initial = to_conjugate(WaveFunction(zg, state.pointer), s.hbar);
  return finish_report(-(mean - initial.mean()), spread, initial.stddev(), s);
}

double internal_clock_reading(double z, const CouplingProfile& profile, double t) {
  return t + z * profile.cumulative(t);
}

bool default_success_rule(const ReadoutReport& report) { return std::abs(report.bias) <= report.spread; }

DurationSweepRecord evaluate_duration_point(const ScenarioParams& params, const SuccessRule& rule) {
  DurationSweepRecord rec;
  rec.duration = params.duration;
  rec.pointer_width = params.pointer_width;

  const PointerPacket nominal{params.pointer_center, params.pointer_width,
                              PointerPacket::default_grid(params.pointer_center, params.pointer_width, params.z_points)};
  const WaveFunction phi = nominal.wavefunction();
  rec.pointer_dp = to_conjugate(phi, params.hbar).stddev();
  rec.resolution_product = params.duration * rec.pointer_dp;

  std::optional<MeasurementScenario> built;
  try {
    built = make_scenario(params);
  } catch (const SingularityError& e) {
    rec.valid = false;
    rec.success = false;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.mean_shift = rec.bias = rec.spread = rec.duration_product = rec.clock_product = nan;
    const Grid1D tg = default_tau_grid(params.t_start, params.duration, params.tau_points);
    const auto profile = make_profile(params.t_start, params.duration, params.shape, tg);
    const double reach = PointerPacket::kTruncation * params.pointer_width;
    rec.max_abs_gz = profile.peak() * std::max(std::abs(params.pointer_center - reach),
                                               std::abs(params.pointer_center + reach));
    rec.clock_spread = nan;
    rec.note = e.what();
    return rec;
  }

  const MeasurementScenario& s = *built;
  const ReadoutReport r = pointer_readout(s);
  rec.valid = true;
  rec.success = rule(r);
  rec.mean_shift = r.mean_shift;
  rec.bias = r.bias;
  rec.spread = r.spread;
  rec.max_abs_gz = r.max_abs_gz;
  rec.duration_product = r.duration_product;

  // Spread of the post-measurement clock offset over the pointer distribution.
  const double t_after = s.profile.t_end() + s.profile.duration();
  double w = 0.0, m = 0.0, v = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double p = std::norm(phi[j]);
    w += p;
    m += p * (internal_clock_reading(s.pointer.grid.point(j), s.profile, t_after) - t_after);
  }
  m /= w;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double d = internal_clock_reading(s.pointer.grid.point(j), s.profile, t_after) - t_after - m;
    v += std::norm(phi[j]) * d * d;
  }
  rec.clock_spread = std::sqrt(v / w);
  rec.clock_product = rec.clock_spread * rec.spread;
  return rec;
}

std::vector<DurationSweepRecord> duration_sweep(const ScenarioParams& base, const std::vector<double>& durations,
                                                const std::vector<double>& pointer_widths, const SuccessRule& rule,
                                                std::size_t threads) {
  const std::size_t nw = pointer_widths.size();
  std::vector<DurationSweepRecord> out(durations.size() * nw);
  parallel_for(out.size(), threads, [&](std::size_t idx) {
    ScenarioParams p = base;
    p.duration = durations[idx / nw];
    p.pointer_width = pointer_widths[idx % nw];
    out[idx] = evaluate_duration_point(p, rule);
  });
  return out;
}

}  // namespace closedweigh
