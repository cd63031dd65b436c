#pragma once

// Two independent numerical evaluations of the cycle integral: quadrature of
// the fading-memory flux, and direct Runge-Kutta integration of the flux-side
// differential equation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "lagcheck/errors.hpp"
#include "lagcheck/expsum.hpp"
#include "lagcheck/kernels.hpp"
#include "lagcheck/model.hpp"
#include "lagcheck/spectral.hpp"

namespace lagcheck {

/// Time samples per period for the outer integral; q.gradT is a trigonometric
/// polynomial of degree 2, so any count above 4 integrates it exactly.
inline constexpr int kCycleSamples = 16;

/// int_0^{2pi/w} q.gradT dt with q from the fading-memory form.
inline double kernel_cycle_integral(ModelOrder order, const LagPair& lags, const ConductivityTensor& t,
                                    const CyclicHistory& h, double rel_tol = 1e-9) {
  require_thermo_order(order);
  if (order.n < 1) throw OrderOutOfRange("kernel oracle needs a flux order n >= 1");
  h.validate();
  const double period = 2.0 * std::numbers::pi / h.omega;
  const auto history = sinusoidal_history(h);
  // Scale of |q|: k times the largest driven amplitude.
  double drive = 0.0, w = 1.0;
  for (int j = 0; j <= order.m; ++j) {
    if (j > 0) w *= lags.tau_T * h.omega / j;
    drive += w;
  }
  const double scale = t.k().norm() * (h.f.norm() + h.g.norm()) * drive;
  double sum = 0.0;
  for (int i = 0; i < kCycleSamples; ++i) {
    const double time = period * i / kCycleSamples;
    const Vec3 q = flux_from_history(order, lags, t, history, time, h.omega, rel_tol * scale);
    sum += q.dot(h.derivative(time, 0));
  }
  return sum * period / kCycleSamples;
}

struct OdeOptions {
  /// Periods integrated before the measured one; 0 selects the default.
  int burn_in_periods = 0;
  int steps_per_period = 512;
};

/// Default burn-in: transients decay like exp(a t / tau_q) with a the
/// spectral abscissa; 12 e-folds, doubled.
inline int default_burn_in(int n, double tau_q, double omega) {
  const double a = std::abs(characteristic_roots(n).spectral_abscissa);
  const double period = 2.0 * std::numbers::pi / omega;
  return std::max(1, 2 * static_cast<int>(std::ceil(12.0 * tau_q / (a * period))));
}

/// Integrates e_n(tau_q d/dt) q = -k e_m(tau_T d/dt) gradT with RK4 from rest
/// and returns the trapezoid integral of q.gradT over the final period.
inline double ode_cycle_integral(ModelOrder order, const LagPair& lags, const ConductivityTensor& t,
                                 const CyclicHistory& h, const OdeOptions& opt = {}) {
  if (order.n < 1 || order.n > kMaxStabilityOrder) throw OrderOutOfRange("ODE oracle needs 1 <= n <= 50");
  if (order.m < 0 || order.m > kMaxThermoOrder) throw OrderOutOfRange("gradient order must lie in 0..4");
  lags.validate(order);
  h.validate();
  if (opt.burn_in_periods < 0) throw InvalidArgument("burn_in_periods must be >= 1");
  if (opt.steps_per_period < 256) throw InvalidArgument("steps_per_period must be >= 256");

  const int n = order.n;
  const double tq = lags.tau_q;
  const double period = 2.0 * std::numbers::pi / h.omega;
  // Keep the step well inside the RK4 stability region of the homogeneous part.
  const int steps = std::max(opt.steps_per_period, static_cast<int>(std::ceil(period / (tq / 50.0))));
  const double dt = period / steps;
  const int burn = opt.burn_in_periods > 0 ? opt.burn_in_periods : default_burn_in(n, tq, h.omega);

  // Taylor weights tau^j / j!.
  std::vector<double> wq(static_cast<std::size_t>(n + 1)), wT(static_cast<std::size_t>(order.m + 1));
  wq[0] = 1.0;
  for (int j = 1; j <= n; ++j) wq[static_cast<std::size_t>(j)] = wq[static_cast<std::size_t>(j - 1)] * tq / j;
  wT[0] = 1.0;
  for (int j = 1; j <= order.m; ++j) wT[static_cast<std::size_t>(j)] = wT[static_cast<std::size_t>(j - 1)] * lags.tau_T / j;

  auto forcing = [&](double time) {
    Vec3 acc = Vec3::Zero();
    for (int j = 0; j <= order.m; ++j) acc += wT[static_cast<std::size_t>(j)] * h.derivative(time, j);
    return Vec3(-(t.k() * acc));
  };
  double drive = 0.0;
  for (int j = 0; j <= order.m; ++j) drive += wT[static_cast<std::size_t>(j)] * std::pow(h.omega, j);
  const double scale = t.k().norm() * (h.f.norm() + h.g.norm()) * drive;

  using State = std::vector<Vec3>;  // q, q', ..., q^(n-1)
  auto rhs = [&](double time, const State& y) {
    State d(y.size());
    for (int j = 0; j + 1 < n; ++j) d[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j + 1)];
    Vec3 acc = forcing(time);
    for (int j = 0; j < n; ++j) acc -= wq[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    d[static_cast<std::size_t>(n - 1)] = acc / wq[static_cast<std::size_t>(n)];
    return d;
  };
  auto axpy = [](const State& y, double a, const State& k) {
    State out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * k[i];
    return out;
  };

  State y(static_cast<std::size_t>(n), Vec3::Zero());
  const long total = static_cast<long>(burn + 1) * steps;
  const long measure_from = static_cast<long>(burn) * steps;
  double integral = 0.0;
  for (long i = 0; i < total; ++i) {
    const double time = dt * static_cast<double>(i);
    if (i >= measure_from) {
      const double weight = i == measure_from ? 0.5 : 1.0;
      integral += weight * y[0].dot(h.derivative(time, 0));
    }
    const State k1 = rhs(time, y);
    const State k2 = rhs(time + 0.5 * dt, axpy(y, 0.5 * dt, k1));
    const State k3 = rhs(time + 0.5 * dt, axpy(y, 0.5 * dt, k2));
    const State k4 = rhs(time + dt, axpy(y, dt, k3));
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!(y[0].norm() <= 1e6 * scale)) {
      std::ostringstream os;
      os << "flux grew beyond 1e6 x forcing scale at t = " << time + dt << " (order n = " << n << ")";
      throw InstabilityDetected(os.str());
    }
  }
  integral += 0.5 * y[0].dot(h.derivative(dt * static_cast<double>(total), 0));
  return integral * dt;
}

struct OracleComparison {
  ModelOrder order;
  LagPair lags;
  double omega = 0.0;
  double value_spectral = 0.0;
  double value_kernel = 0.0;
  double value_ode = 0.0;
  double max_rel_disagreement = 0.0;
};

inline double relative_disagreement(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

/// Runs all three evaluations on the canonical cycle: k = I, f = e_x, g = 0.
inline OracleComparison compare_all(ModelOrder order, const LagPair& lags, double omega) {
  require_thermo_order(order);
  if (order.n < 1) throw OrderOutOfRange("oracle comparison needs a flux order n >= 1");
  const auto k = ConductivityTensor::identity();
  const CyclicHistory h{Vec3::UnitX(), Vec3::Zero(), omega};
  OracleComparison c;
  c.order = order;
  c.lags = lags;
  c.omega = omega;
  c.value_spectral = cycle_integral(order, lags, k, h);
  c.value_kernel = kernel_cycle_integral(order, lags, k, h);
  c.value_ode = ode_cycle_integral(order, lags, k, h);
  c.max_rel_disagreement = std::max({relative_disagreement(c.value_spectral, c.value_kernel),
                                     relative_disagreement(c.value_spectral, c.value_ode),
                                     relative_disagreement(c.value_kernel, c.value_ode)});
  return c;
}

}  // namespace lagcheck
