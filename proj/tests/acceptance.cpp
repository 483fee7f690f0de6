// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "closedweigh/config.hpp"
#include "closedweigh/disc.hpp"
#include "closedweigh/harness.hpp"
#include "closedweigh/measurement.hpp"
#include "closedweigh/weighing.hpp"
#include "generators.hpp"

namespace cw = closedweigh;

namespace {

// Pinned tolerances.
constexpr double kResidualTol = 1e-8;
constexpr double kFidelityTol = 1e-6;
constexpr double kIdealShiftTol = 1e-3;
constexpr double kFrontierLow = 0.1;
constexpr double kFrontierHigh = 10.0;
constexpr double kIdentityTol = 1e-12;
constexpr double kProductFloor = 0.25;
constexpr double kDriftTol = 1e-8;
constexpr double kClockOffsetTol = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && secs > budget_s) {
    out.pass = false;
    out.detail += " [over time budget]";
  }
  if (!out.pass) ++failures;
  std::printf("%s [%d] %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Shared between the propagation and conservation criteria.
struct EvolvedRun {
  cw::MeasurementScenario scenario;
  cw::JointState state;
};

EvolvedRun evolve_half_coupling() {
  cw::ScenarioParams p;
  p.duration = 1.0;
  p.total_energy = 1.0;
  p.box_energy = 0.3;
  p.pointer_width = 0.05;  // max|g z| = 2 * 5 * 0.05 = 0.5
  p.tau_points = 1024;
  p.z_points = 32;
  auto s = cw::make_scenario(p);
  auto state = cw::evolve_scenario(s, cw::completion_time(s), cw::default_time_step(s));
  return {std::move(s), std::move(state)};
}

const EvolvedRun& evolved() {
  static const EvolvedRun run = evolve_half_coupling();
  return run;
}

Outcome stationary_consistency() {
  gen::Source src(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = gen::scenario(src, cw::ProfileShape::smoothstep_bump);
    const auto s = cw::make_scenario(p);
    const double z = src.sign() * src.uniform(0.0, 0.5) / s.profile.peak();
    worst = std::max(worst, cw::ode_residual(cw::stationary_solution(s, z), s, z));
  }
  return {worst < kResidualTol, fmt("max residual %.3g over 100 draws, tol %.0e", worst, kResidualTol)};
}

Outcome propagation_cross_check() {
  const auto& run = evolved();
  double worst = 1.0;
  for (std::size_t a = 0; a < run.state.active.size(); ++a) {
    const double z = run.state.z_grid.point(run.state.active[a]);
    const auto ref = cw::stationary_wavepacket(run.scenario, z, run.state.t_total);
    worst = std::min(worst, run.state.slices[a].fidelity(ref));
  }
  const bool ok = worst > 1.0 - kFidelityTol && run.scenario.max_abs_gz() <= 0.5 + 1e-12 &&
                  run.scenario.tau_grid().size() == 1024;
  return {ok, fmt("min fidelity 1-%.3g over %g slices at max|gz| = %.2f", 1.0 - worst,
                  static_cast<double>(run.state.active.size()), run.scenario.max_abs_gz())};
}

Outcome ideal_shift() {
  double worst = 0.0;
  for (double e0 : {0.5, 1.0, 2.0, 5.0}) {
    for (double tau0 : {1.0, 10.0}) {
      cw::ScenarioParams p;
      p.total_energy = e0;
      p.duration = tau0;
      p.pointer_width = 1e-2 * tau0 / (2.0 * 5.0);  // max|g z| = 1e-2 for the raised cosine
      const auto s = cw::make_scenario(p);
      if (s.max_abs_gz() > 1e-2 + 1e-15) return {false, "scenario exceeds max|gz| = 1e-2"};
      const auto r = cw::pointer_readout(s);
      worst = std::max(worst, std::abs(r.mean_shift - e0) / e0);
    }
  }
  return {worst < kIdealShiftTol, fmt("max relative deviation %.3g, tol %.0e", worst, kIdealShiftTol)};
}

Outcome failure_frontier() {
  cw::RunConfig c;
  c.experiment = cw::Experiment::internal_measurement;
  c.measurement.total_energy = 1.0;
  c.sweep = {{"duration", 1.0, 100.0, 16, cw::Spacing::log}, {"pointer_width", 0.01, 100.0, 16, cw::Spacing::log}};
  const auto records = cw::run_sweep(c, 1);
  const auto& names = cw::metric_names(c.experiment);
  const auto col = [&](const char* n) {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  const std::size_t success = col("success"), resolution = col("resolution_product");
  const auto ok_at = [&](std::size_t i, std::size_t j) { return records[i * 16 + j].metrics[success] != 0.0; };

  bool monotone = true;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 1; j < 16; ++j) {
      if (ok_at(i, j) && !ok_at(i, j - 1)) monotone = false;  // wider pointer must not rescue a failure
      if (i > 0 && ok_at(i - 1, j) && !ok_at(i, j)) monotone = false;  // longer coupling must not break a success
    }
  }
  double lo = INFINITY, hi = 0.0;
  int crossings = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 1; j < 16; ++j) {
      if (ok_at(i, j - 1) && !ok_at(i, j)) {
        // Boundary point: geometric midpoint of the two flanking cells.
        const double a = records[i * 16 + j - 1].metrics[resolution];
        const double b = records[i * 16 + j].metrics[resolution];
        const double boundary = std::sqrt(a * b);
        lo = std::min(lo, boundary);
        hi = std::max(hi, boundary);
        ++crossings;
      }
    }
  }
  const bool ok = monotone && crossings == 16 && lo >= kFrontierLow && hi <= kFrontierHigh;
  return {ok, fmt("%g/16 rows cross; boundary tau0*dE0/hbar in [%.3g, %.3g]", crossings, lo, hi) +
                  (monotone ? ", monotone" : ", NOT monotone")};
}

Outcome weighing_identity() {
  gen::Source src(202);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = gen::shell(src);
    const double dz = e.R * src.log_uniform(1e-12, 1e-3);
    const double dp = src.log_uniform(1e-6, 1e6);
    const double tau = cw::weighing::return_time(e);
    worst = std::max(worst, std::abs(cw::weighing::product_identity(e, dz, dp, tau) / (dz * dp) - 1.0));
  }
  double min_ratio = INFINITY;
  const std::vector<std::pair<cw::weighing::ShellExperiment, double>> sets{
      {{1e12, 1e4, 1e9, 100.0, 1.0, 1e6, 1.0}, 1e-7},
      {{1e12, 1e4, 1e9, 100.0, 1.0, 1e6, 1.0}, 1e-5},
      {{1e6, 1e3, 1e3, 1e-2, 1.0, 1e3, 1e-8}, 1e-7},
  };
  for (const auto& [e, dz] : sets) {
    const auto mc = cw::weighing::monte_carlo_weighing(e, dz, 10000, 7);
    min_ratio = std::min(min_ratio, mc.product / e.hbar);
  }
  return {worst < kIdentityTol && min_ratio >= kProductFloor,
          fmt("max |ratio-1| %.3g over 1000 draws; min MC product %.3g hbar", worst, min_ratio)};
}

Outcome disc_identity() {
  gen::Source src(303);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto e = gen::disc(src);
    const double dr = e.r * src.log_uniform(1e-9, 1e-2);
    const double dp = src.log_uniform(1e-6, 1e6);
    worst = std::max(worst, std::abs(cw::disc::angular_product(e, dr, dp).product / (dr * dp) - 1.0));
  }
  double min_ratio = INFINITY;
  const std::vector<std::pair<cw::disc::DiscExperiment, double>> sets{
      {{1.0, 1.0, 1e-6, 1.0, 1.0, 1.0}, 1e-2},
      {{1e3, 10.0, 1e-2, 0.5, 3.0, 1.0}, 1e-4},
      {{5.0, 0.2, 1e-5, 2.0, 50.0, 0.1}, 0.3},
  };
  for (const auto& [e, dr] : sets) {
    const auto mc = cw::disc::monte_carlo_disc(e, dr, 10000, 11);
    min_ratio = std::min(min_ratio, mc.product / e.hbar);
  }
  return {worst < kIdentityTol && min_ratio >= kProductFloor,
          fmt("max |ratio-1| %.3g over 1000 draws; min MC product %.3g hbar", worst, min_ratio)};
}

Outcome conservation() {
  const auto& st = evolved().state;
  const double joint_norm = std::abs(st.joint_norm_final - st.joint_norm_initial) / st.joint_norm_initial;
  const double joint_energy =
      std::abs(st.joint_energy_final - st.joint_energy_initial) / std::abs(st.joint_energy_initial);
  const double norm = std::max(st.max_norm_drift, joint_norm);
  const double energy = std::max(st.max_energy_drift, joint_energy);
  return {norm < kDriftTol && energy < kDriftTol,
          fmt("norm drift %.3g, energy drift %.3g, tol %.0e", norm, energy, kDriftTol)};
}

Outcome clock_bookkeeping() {
  cw::ScenarioParams p;
  p.duration = 2.0;
  p.pointer_width = 0.05;
  const auto s = cw::make_scenario(p);
  const double after = s.profile.t_end() + 1.0;
  const auto phi = s.pointer_packet();
  const auto& zg = s.pointer.grid;
  double worst = 0.0, mean = 0.0, second = 0.0, mass = 0.0, z_mean = 0.0, z_second = 0.0;
  for (std::size_t j = 0; j < zg.size(); ++j) {
    const double z = zg.point(j);
    const double offset = cw::internal_clock_reading(z, s.profile, after) - after;
    worst = std::max(worst, std::abs(offset - z));
    const double w = std::norm(phi[j]);
    mass += w;
    mean += w * offset;
    second += w * offset * offset;
    z_mean += w * z;
    z_second += w * z * z;
  }
  const double offset_spread = std::sqrt(second / mass - (mean / mass) * (mean / mass));
  const double z_spread = std::sqrt(z_second / mass - (z_mean / mass) * (z_mean / mass));
  const double record_spread = cw::evaluate_duration_point(p).clock_spread;
  const double spread_err = std::max(std::abs(offset_spread - z_spread), std::abs(record_spread - z_spread));
  return {worst <= kClockOffsetTol && spread_err <= kClockOffsetTol,
          fmt("max |offset - z| %.3g, |clock spread - dz| %.3g, tol %.0e", worst, spread_err, kClockOffsetTol)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(CW_WORK_DIR) / "acceptance_determinism";
  fs::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> configs{
      {"internal-measurement",
       R"({"experiment":"internal-measurement","seed":5,"sweep":[{"name":"duration","min":1,"max":100,"n":5},)"
       R"({"name":"pointer_width","min":0.01,"max":10,"n":5}]})"},
      {"weighing",
       R"({"experiment":"weighing","seed":9,"parameters":{"M":1e12,"R":1e4,"m":1e9,"v0":100,"c":1e6,"samples":4000},)"
       R"("sweep":[{"name":"dz","min":1e-7,"max":1e-5,"n":8}]})"},
      {"disc", R"({"experiment":"disc","seed":13,"parameters":{"samples":4000},)"
               R"("sweep":[{"name":"dr","min":1e-4,"max":1e-2,"n":4},{"name":"T","min":1,"max":10,"n":3}]})"},
  };
  int compared = 0;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = dir / (name + ".json");
    std::ofstream(cfg) << text;
    for (const char* format : {"csv", "json"}) {
      std::vector<std::string> outputs;
      for (int threads : {1, 4, 1, 3}) {
        const fs::path out = dir / (name + "_" + std::to_string(outputs.size()) + "." + format);
        std::ostringstream cmd;
        cmd << '"' << CW_CLI_PATH << "\" " << name << " --config \"" << cfg.string() << "\" --out \""
            << out.string() << "\" --format " << format << " --threads " << threads;
        if (std::system(cmd.str().c_str()) != 0) return {false, "CLI run failed: " + cmd.str()};
        outputs.push_back(slurp(out));
      }
      for (const auto& o : outputs) {
        if (o.empty() || o != outputs.front()) return {false, name + " " + format + " output differs between runs"};
      }
      ++compared;
    }
  }
  return {true, fmt("%g experiment/format pairs byte-identical over 4 runs at 1, 4, 1, 3 threads", compared)};
}

}  // namespace

int main() {
  report(1, "stationary-solution consistency", 10.0, stationary_consistency);
  report(2, "propagation cross-check", 60.0, propagation_cross_check);
  report(3, "ideal pointer shift", 10.0, ideal_shift);
  report(4, "failure frontier", 300.0, failure_frontier);
  report(5, "weighing identity", 60.0, weighing_identity);
  report(6, "disc identity", 60.0, disc_identity);
  report(7, "conservation suite", 0.0, conservation);
  report(8, "back-reaction bookkeeping", 0.0, clock_bookkeeping);
  report(9, "determinism", 0.0, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
