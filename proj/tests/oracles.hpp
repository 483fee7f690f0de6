#pragma once

// Independent reference computations used only by tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

/// O(n^2) forward DFT, unnormalized, e^{-2 pi i jk/n}.
inline std::vector<Complex> direct_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += x[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>((j * k) % n) / static_cast<double>(n));
    }
    out[k] = acc;
  }
  return out;
}

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-14);
}

/// Raised-cosine switching function written out directly.
struct RaisedCosine {
  double t_start;
  double duration;
  double operator()(double tau) const {
    const double u = (tau - t_start) / duration;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return (1.0 - std::cos(2.0 * kPi * u)) / duration;
  }
};

/// Clock delay integral of g z / (1 + g z).
inline double clock_delay(const RaisedCosine& g, double z) {
  return integrate([&](double t) { return g(t) * z / (1.0 + g(t) * z); }, g.t_start, g.t_start + g.duration);
}

/// d/dz of the clock delay: integral of g / (1 + g z)^2.
inline double clock_delay_slope(const RaisedCosine& g, double z) {
  return integrate([&](double t) { return g(t) / ((1.0 + g(t) * z) * (1.0 + g(t) * z)); }, g.t_start,
                   g.t_start + g.duration);
}

/// Tapered Gaussian pointer amplitude (unnormalized) and its z-derivative:
/// exp(-u^2/4) (1 - S(u - 4)), u = |z - c| / w, S the exp(-1/x) smooth step.
struct PointerAmplitude {
  double center;
  double width;

  static double step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
  }
  static double step_slope(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a * b * (1.0 / (x * x) + 1.0 / ((1.0 - x) * (1.0 - x))) / ((a + b) * (a + b));
  }
  double value(double z) const {
    const double u = std::abs(z - center) / width;
    if (u >= 5.0) return 0.0;
    return std::exp(-u * u / 4.0) * (1.0 - step(u - 4.0));
  }
  double slope(double z) const {
    const double d = z - center;
    const double u = std::abs(d) / width;
    if (u >= 5.0) return 0.0;
    const double du = (d >= 0.0 ? 1.0 : -1.0) / width;
    const double gauss = std::exp(-u * u / 4.0);
    const double window = 1.0 - step(u - 4.0);
    return (-u / 2.0 * gauss * window - gauss * step_slope(u - 4.0)) * du;
  }
};

struct Moments {
  double mean_shift;
  double spread;
  double pointer_dp;
};

/// Readout moments by dense quadrature in z. The final pointer state is
/// phi(z) exp(-i E0 D(z) / hbar), so <p> = -E0 <D'> and
/// <p^2> = hbar^2 <phi'^2> + E0^2 <D'^2> for real phi.
inline Moments readout_moments(const RaisedCosine& g, const PointerAmplitude& phi, double e0, double hbar) {
  const double c = phi.center, w = phi.width;
  const std::array<double, 5> cuts{c - 5 * w, c - 4 * w, c + 4 * w, c + 5 * w, 0.0};
  auto over_support = [&](auto f) {
    return integrate(f, cuts[0], cuts[1]) + integrate(f, cuts[1], cuts[2]) + integrate(f, cuts[2], cuts[3]);
  };
  const double norm = over_support([&](double z) { return phi.value(z) * phi.value(z); });
  const double kinetic = over_support([&](double z) { return phi.slope(z) * phi.slope(z); }) / norm;
  const double d1 = over_support([&](double z) { return clock_delay_slope(g, z) * phi.value(z) * phi.value(z); }) / norm;
  const double d2 = over_support([&](double z) {
    const double s = clock_delay_slope(g, z);
    return s * s * phi.value(z) * phi.value(z);
  }) / norm;
  const double mean = e0 * d1;
  const double var = hbar * hbar * kinetic + e0 * e0 * d2 - mean * mean;
  return {mean, std::sqrt(var), hbar * std::sqrt(kinetic)};
}

/// Return time of a radial throw from r = R at speed v0 under G M / r^2,
/// by adaptive Dormand-Prince integration with dense-output root bracketing.
inline double radial_return_time(double G, double M, double R, double v0) {
  using State = std::array<double, 2>;
  auto rhs = [&](const State& x, State& dx, double) {
    dx[0] = x[1];
    dx[1] = -G * M / (x[0] * x[0]);
  };
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  const double scale = 2.0 * R * R * v0 / (G * M);
  stepper.initialize(State{R, v0}, 0.0, scale * 1e-3);
  for (;;) {
    const auto [t0, t1] = stepper.do_step(rhs);
    if (stepper.current_state()[0] < R && stepper.current_state()[1] < 0.0) {
      double lo = t0, hi = t1;
      State x;
      for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, x);
        (x[0] >= R ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
}

}  // namespace oracle
