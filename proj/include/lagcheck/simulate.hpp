#pragma once

// Free decay of the homogeneous flux equation e_n(tau_q d/dt) q = 0, one
// scalar component, integrated with RK4 in companion form.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string_view>
#include <vector>

#include "lagcheck/errors.hpp"

namespace lagcheck {

enum class Outcome { Decayed, BlewUp, Inconclusive };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Decayed: return "Decayed";
    case Outcome::BlewUp: return "BlewUp";
    case Outcome::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline constexpr int kMaxSimulateOrder = 10;
inline constexpr double kDecayedFactor = 1e-9;
inline constexpr double kBlowUpFactor = 1e6;
/// Growth at which a blown-up run stops; the stretch past kBlowUpFactor lets
/// the dominant mode take over before the envelope is fitted.
inline constexpr double kBlowUpStop = 1e30;
/// Default horizon in units of tau_q.
inline constexpr double kDefaultHorizonLags = 100.0;

struct Trajectory {
  int n = 0;
  double tau_q = 1.0;
  std::vector<double> times;
  std::vector<double> values;  // |q|(t)
  double fitted_rate = 0.0;    // 1/s
  Outcome outcome = Outcome::Inconclusive;
};

namespace detail {

inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

/// Growth rate of the envelope of |q| over the last third of the run: least
/// squares on the logs of the local maxima, or on all samples when |q| does
/// not oscillate.
inline double fit_envelope_rate(const std::vector<double>& t, const std::vector<double>& v) {
  const std::size_t start = v.size() - v.size() / 3;
  std::vector<double> px, py;
  for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > 0.0) {
      px.push_back(t[i]);
      py.push_back(std::log(v[i]));
    }
  }
  if (px.size() >= 3) return least_squares_slope(px, py);
  px.clear();
  py.clear();
  for (std::size_t i = start; i < v.size(); ++i) {
    if (v[i] > 0.0) {
      px.push_back(t[i]);
      py.push_back(std::log(v[i]));
    }
  }
  return px.size() >= 2 ? least_squares_slope(px, py) : 0.0;
}

}  // namespace detail

/// initial holds tau_q^j q^(j)(0), j = 0..n-1. horizon and step default (<= 0)
/// to 100 tau_q and tau_q / 50.
inline Trajectory free_decay(int n, double tau_q, const std::vector<double>& initial, double horizon = 0.0,
                             double step = 0.0) {
  if (n < 1 || n > kMaxSimulateOrder) {
    std::ostringstream os;
    os << "free decay accepts orders 1..10, got " << n;
    throw OrderOutOfRange(os.str());
  }
  if (!(tau_q > 0.0) || !std::isfinite(tau_q)) throw InvalidArgument("tau_q must be > 0");
  if (initial.size() != static_cast<std::size_t>(n)) throw InvalidArgument("need exactly n initial values");
  if (horizon <= 0.0) horizon = kDefaultHorizonLags * tau_q;
  if (step <= 0.0) step = tau_q / 50.0;
  if (step > tau_q / 50.0 * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step " << step << " exceeds tau_q / 50 = " << tau_q / 50.0;
    throw StepTooLarge(os.str());
  }

  // Scaled state y_j = tau_q^j q^(j); in scaled time x = t / tau_q the equation
  // is sum_j y_j / j! + y_n / n! = 0.
  std::vector<double> inv_fact(static_cast<std::size_t>(n + 1));
  inv_fact[0] = 1.0;
  for (int j = 1; j <= n; ++j) inv_fact[static_cast<std::size_t>(j)] = inv_fact[static_cast<std::size_t>(j - 1)] / j;
  auto rhs = [&](const std::vector<double>& y) {
    std::vector<double> d(y.size());
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j + 1 < n) d[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j + 1)];
      acc += inv_fact[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    }
    d[static_cast<std::size_t>(n - 1)] = -acc / inv_fact[static_cast<std::size_t>(n)];
    return d;
  };
  auto norm = [](const std::vector<double>& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
  };

  Trajectory tr;
  tr.n = n;
  tr.tau_q = tau_q;
  std::vector<double> y = initial;
  const double n0 = norm(y);
  if (!(n0 > 0.0)) throw InvalidArgument("initial state must be non-zero");
  const long steps = static_cast<long>(std::ceil(horizon / step - 1e-9));
  const double h = step / tau_q;
  tr.times.push_back(0.0);
  tr.values.push_back(std::abs(y[0]));
  std::vector<double> tmp(y.size());
  for (long i = 0; i < steps; ++i) {
    const auto k1 = rhs(y);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
    const auto k2 = rhs(tmp);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
    const auto k3 = rhs(tmp);
    for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + h * k3[j];
    const auto k4 = rhs(tmp);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    tr.times.push_back(step * static_cast<double>(i + 1));
    tr.values.push_back(std::abs(y[0]));
    const double ny = norm(y);
    if (ny > kBlowUpFactor * n0) tr.outcome = Outcome::BlewUp;
    if (ny > kBlowUpStop * n0) break;
  }
  if (tr.outcome != Outcome::BlewUp && norm(y) < kDecayedFactor * n0) tr.outcome = Outcome::Decayed;
  tr.fitted_rate = detail::fit_envelope_rate(tr.times, tr.values);
  return tr;
}

}  // namespace lagcheck
