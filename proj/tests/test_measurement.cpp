#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "closedweigh/errors.hpp"
#include "closedweigh/measurement.hpp"
#include "closedweigh/spectral.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace closedweigh;

namespace {

ScenarioParams params(double e0, double tau0, double width, ProfileShape shape = ProfileShape::raised_cosine) {
  ScenarioParams p;
  p.total_energy = e0;
  p.duration = tau0;
  p.pointer_width = width;
  p.shape = shape;
  return p;
}

}  // namespace

TEST_SUITE("stationary solution") {
  TEST_CASE("uncoupled pointer value gives a plane wave") {
    auto p = params(1.5, 2.0, 0.01);
    p.box_energy = 0.4;
    const auto s = make_scenario(p);
    const auto psi = stationary_solution(s, 0.0);
    for (std::size_t j = 0; j < psi.size(); j += 37) {
      const double tau = s.tau_grid().point(j);
      CHECK(std::abs(psi[j] - std::polar(1.0, (1.5 - 0.4) * tau)) < 1e-12);
    }
  }

  TEST_CASE("smoothstep bump residual is at roundoff level") {
    gen::Source src(5);
    for (int i = 0; i < 20; ++i) {
      const auto p = gen::scenario(src, ProfileShape::smoothstep_bump);
      const auto s = make_scenario(p);
      const double z = src.sign() * src.uniform(0.0, 0.5) / s.profile.peak();
      CHECK(ode_residual(stationary_solution(s, z), s, z) < 1e-10);
    }
  }

  // The raised cosine has a jump in g'' at the support edges. A spectral
  // derivative sees that as Gibbs ringing, so the residual stalls far above
  // 1e-8 and only improves slowly with resolution.
  TEST_CASE("raised cosine residual below 1e-8" * doctest::should_fail()) {
    const auto s = make_scenario(params(1.0, 1.0, 0.01));
    const double z = 0.25;
    CHECK(ode_residual(stationary_solution(s, z), s, z) < 1e-8);
  }

  TEST_CASE("raised cosine residual converges at first order") {
    double previous = INFINITY;
    for (std::size_t n : {256u, 512u, 1024u, 2048u, 4096u}) {
      auto p = params(1.0, 1.0, 0.01);
      p.tau_points = n;
      const auto s = make_scenario(p);
      const double r = ode_residual(stationary_solution(s, 0.25), s, 0.25);
      if (std::isfinite(previous)) CHECK(r / previous == doctest::Approx(0.5).epsilon(0.05));
      previous = r;
    }
  }

  TEST_CASE("residual flags a state that is not stationary") {
    const auto s = make_scenario(params(1.0, 1.0, 0.01, ProfileShape::smoothstep_bump));
    const auto wrong = stationary_solution(s, 0.1);
    CHECK(ode_residual(wrong, s, 0.2) > 1e-3);
  }

  TEST_CASE("singular coupling is rejected") {
    const auto s = make_scenario(params(1.0, 1.0, 0.01));
    CHECK_THROWS_AS(stationary_solution(s, -0.6), SingularityError);  // 1 + 2 * (-0.6) < 0
    CHECK_THROWS_AS(make_scenario(params(1.0, 1.0, 0.2)), SingularityError);
  }
}

TEST_SUITE("clock delay") {
  TEST_CASE("agrees with direct quadrature") {
    const oracle::RaisedCosine g{0.0, 3.0};
    auto p = params(1.0, 3.0, 0.01);
    const auto s = make_scenario(p);
    for (double z : {-0.9, -0.3, 0.0, 0.2, 1.2}) {
      CHECK(clock_delay(s.profile, z) == doctest::Approx(oracle::clock_delay(g, z)).epsilon(1e-12));
    }
    CHECK(clock_delay(s.profile, 0.0) == 0.0);
  }

  TEST_CASE("first-order clock reading matches the delay for small z") {
    const auto s = make_scenario(params(1.0, 1.0, 0.01));
    const double z = 1e-4, after = s.profile.t_end() + 2.0;
    const double first_order = internal_clock_reading(z, s.profile, after) - after;
    CHECK(first_order == doctest::Approx(z).epsilon(1e-14));
    CHECK(clock_delay(s.profile, z) == doctest::Approx(z).epsilon(1e-3));
    CHECK(internal_clock_reading(z, s.profile, s.profile.t_start() - 1.0) == s.profile.t_start() - 1.0);
  }
}

TEST_SUITE("readout") {
  TEST_CASE("ideal shift at weak coupling") {
    // E0 = 2 with max|g z| <= 1e-3
    const auto s = make_scenario(params(2.0, 1.0, 1e-4));
    CHECK(s.max_abs_gz() <= 1e-3);
    const auto r = pointer_readout(s);
    CHECK(r.mean_shift == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r.success);
  }

  TEST_CASE("no energy, no shift") {
    const auto r = pointer_readout(make_scenario(params(0.0, 1.0, 0.02)));
    CHECK(std::abs(r.mean_shift) < 1e-12);
    CHECK(r.spread == doctest::Approx(r.pointer_dp).epsilon(1e-12));
  }

  TEST_CASE("strong coupling bias and broadening match dense quadrature") {
    for (double e0 : {1.0, 3.0}) {
      const double tau0 = 2.0, width = 0.5 * tau0 / (2.0 * 5.0);  // max|g z| = 0.5
      const auto s = make_scenario(params(e0, tau0, width));
      const auto r = pointer_readout(s);
      const auto ref = oracle::readout_moments({0.0, tau0}, {0.0, width}, e0, 1.0);
      CHECK(r.mean_shift == doctest::Approx(ref.mean_shift).epsilon(1e-6));
      CHECK(r.spread == doctest::Approx(ref.spread).epsilon(1e-6));
      CHECK(r.pointer_dp == doctest::Approx(ref.pointer_dp).epsilon(1e-6));
      CHECK(std::abs(r.bias) > 1e-3);  // visibly biased
      CHECK(r.spread > r.pointer_dp);  // and broadened
    }
  }

  TEST_CASE("pointer momentum spread is close to the untapered minimum-uncertainty value") {
    const auto s = make_scenario(params(1.0, 1.0, 0.01));
    const double dp = to_conjugate(s.pointer_packet()).stddev();
    CHECK(dp == doctest::Approx(1.0 / (2.0 * 0.01)).epsilon(1e-3));
  }
}

TEST_SUITE("real-time evolution") {
  TEST_CASE("evolved readout agrees with the stationary phases") {
    auto p = params(1.0, 1.0, 0.02);
    p.tau_points = 512;
    p.z_points = 16;
    const auto s = make_scenario(p);
    const auto state = evolve_scenario(s, completion_time(s), default_time_step(s));
    CHECK(state.max_norm_drift < 1e-10);
    CHECK(state.max_energy_drift < 1e-10);
    for (std::size_t a = 0; a < state.active.size(); ++a) {
      const double z = state.z_grid.point(state.active[a]);
      CHECK(state.slices[a].fidelity(stationary_wavepacket(s, z, state.t_total)) > 1.0 - 1e-9);
    }
    const auto evolved = pointer_readout(state, s);
    CHECK(evolved.mean_shift == doctest::Approx(pointer_readout(s).mean_shift).epsilon(1e-4));
  }

  TEST_CASE("refusals") {
    auto p = params(1.0, 1.0, 0.02);
    p.tau_points = 256;
    p.z_points = 16;
    const auto s = make_scenario(p);
    CHECK_THROWS_AS(evolve_scenario(s, 0.5, default_time_step(s)), Refusal);
    const auto early = evolve_scenario(s, 1.0, default_time_step(s));  // packet still inside the coupling
    CHECK_THROWS_AS(pointer_readout(early, s), Refusal);
  }

  TEST_CASE("thread count does not change the evolved state") {
    auto p = params(1.0, 1.0, 0.02);
    p.tau_points = 256;
    p.z_points = 16;
    const auto s = make_scenario(p);
    const auto one = evolve_scenario(s, completion_time(s), default_time_step(s), 1);
    const auto three = evolve_scenario(s, completion_time(s), default_time_step(s), 3);
    REQUIRE(one.slices.size() == three.slices.size());
    for (std::size_t a = 0; a < one.slices.size(); ++a) {
      for (std::size_t j = 0; j < one.slices[a].size(); ++j) CHECK(one.slices[a][j] == three.slices[a][j]);
    }
  }
}

TEST_SUITE("duration sweep") {
  TEST_CASE("records are ordered and invalid points are flagged, not dropped") {
    const std::vector<double> durations{1.0, 10.0}, widths{0.01, 0.5, 5.0};
    const auto recs = duration_sweep(ScenarioParams{}, durations, widths, default_success_rule, 2);
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].duration == 1.0);
    CHECK(recs[2].pointer_width == 5.0);
    CHECK(recs[3].duration == 10.0);
    CHECK(recs[0].valid);
    CHECK_FALSE(recs[2].valid);
    CHECK_FALSE(recs[2].success);
    CHECK(std::isnan(recs[2].spread));
    CHECK(recs[2].pointer_dp > 0.0);
    CHECK_FALSE(recs[2].note.empty());
  }

  TEST_CASE("property: success never reappears as the pointer widens") {
    gen::Source src(9);
    for (int trial = 0; trial < 5; ++trial) {
      ScenarioParams base;
      base.total_energy = src.uniform(0.2, 2.0);
      const double tau0 = src.log_uniform(1.0, 50.0);
      std::vector<double> widths;
      for (int k = 0; k < 12; ++k) widths.push_back(0.01 * std::pow(1.8, k));
      const auto recs = duration_sweep(base, {tau0}, widths);
      bool failed = false;
      for (const auto& r : recs) {
        if (failed) CHECK_FALSE(r.success);
        failed = failed || !r.success;
      }
    }
  }

  TEST_CASE("custom success rule") {
    const auto strict = [](const ReadoutReport& r) { return std::abs(r.bias) < 1e-12; };
    const auto rec = evaluate_duration_point(params(1.0, 1.0, 0.04), strict);
    CHECK(rec.valid);
    CHECK_FALSE(rec.success);
  }
}
