#pragma once

// Fading-memory form of the flux-side operator: for n <= 4 the equation
// e_n(tau_q d/dt) q = F has the causal solution q(t) = int_0^inf G(s) F(t-s) ds
// with G the resolvent kernel, written through the roots of e_n.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>
#include <utility>

#include "lagcheck/errors.hpp"
#include "lagcheck/expsum.hpp"
#include "lagcheck/model.hpp"
#include "lagcheck/quadrature.hpp"

namespace lagcheck {

/// Root parameters of e_3: roots {-alpha, -gamma +- i delta}.
struct Kernel3Params {
  double alpha, gamma, delta;
};

/// Root parameters of e_4: roots {-alpha +- i beta, -gamma +- i delta}.
struct Kernel4Params {
  double alpha, beta, gamma, delta;
};

/// Five-digit constants as published alongside the n = 3 and n = 4 kernels.
inline constexpr Kernel3Params kPublishedKernel3{1.5961, 0.70196, 1.8073};
inline constexpr Kernel4Params kPublishedKernel4{0.27056, 2.5048, 1.7294, 0.88897};
inline constexpr double kPublishedDelta = -22.165;

inline Kernel3Params kernel3_from_roots() {
  const auto rep = characteristic_roots(3);
  Kernel3Params p{};
  for (const cplx& r : rep.roots) {
    if (std::abs(r.imag()) <= kRealRootTol) {
      p.alpha = -r.real();
    } else if (r.imag() > 0.0) {
      p.gamma = -r.real();
      p.delta = r.imag();
    }
  }
  return p;
}

inline Kernel4Params kernel4_from_roots() {
  const auto rep = characteristic_roots(4);
  // Upper-half-plane roots; the slower pair (alpha, beta) has the larger real part.
  std::vector<cplx> up;
  for (const cplx& r : rep.roots) {
    if (r.imag() > 0.0) up.push_back(r);
  }
  std::sort(up.begin(), up.end(), [](const cplx& a, const cplx& b) { return a.real() > b.real(); });
  return {-up[0].real(), up[0].imag(), -up[1].real(), up[1].imag()};
}

/// The normalizing combination of the n = 4 root parameters.
inline double kernel4_delta(const Kernel4Params& p) {
  const double a = p.alpha, b = p.beta, g = p.gamma, d = p.delta;
  return 3 * a * b * b - 3 * g * d * d + g * g * g - a * a * a -
         1.0 / (2 * (g - a)) *
             ((g - a) * (g - a) * (3 * a * a + 3 * g * g - b * b - d * d) +
              (b * b - d * d) * (3 * g * g - 3 * a * a + b * b - d * d));
}

class MemoryKernel {
public:
  /// Kernel with parameters recomputed from the roots of e_n.
  static MemoryKernel make(int n, double tau_q) {
    check(n, tau_q);
    MemoryKernel k(n, tau_q);
    if (n == 3) k.p3_ = kernel3_from_roots();
    if (n == 4) k.p4_ = kernel4_from_roots();
    k.finish();
    return k;
  }

  /// Kernel built from the published five-digit constants (golden tests only).
  static MemoryKernel published(int n, double tau_q) {
    check(n, tau_q);
    MemoryKernel k(n, tau_q);
    k.p3_ = kPublishedKernel3;
    k.p4_ = kPublishedKernel4;
    k.finish();
    return k;
  }

  static MemoryKernel with_params(double tau_q, const Kernel3Params& p) {
    check(3, tau_q);
    MemoryKernel k(3, tau_q);
    k.p3_ = p;
    k.finish();
    return k;
  }

  static MemoryKernel with_params(double tau_q, const Kernel4Params& p) {
    check(4, tau_q);
    MemoryKernel k(4, tau_q);
    k.p4_ = p;
    k.finish();
    return k;
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double tau_q() const { return tau_q_; }
  [[nodiscard]] const Kernel3Params& params3() const { return p3_; }
  [[nodiscard]] const Kernel4Params& params4() const { return p4_; }
  [[nodiscard]] double delta4() const { return delta4_; }
  /// c_n: the constant in front of the unnormalized kernel shape.
  [[nodiscard]] double normalization() const { return c_; }
  /// Slowest decay rate among the exponentials, in 1/tau_q units.
  [[nodiscard]] double decay_rate() const { return rho_; }
  /// Fastest oscillation frequency, in 1/tau_q units (0 when none).
  [[nodiscard]] double max_frequency() const { return nu_; }

  /// Unnormalized shape as a function of x = s / tau_q.
  [[nodiscard]] double core(double x) const {
    switch (n_) {
      case 1: return std::exp(-x);
      case 2: return std::exp(-x) * std::sin(x);
      case 3: {
        const auto& p = p3_;
        return std::exp(-p.alpha * x) +
               std::exp(-p.gamma * x) * ((p.alpha - p.gamma) / p.delta * std::sin(p.delta * x) - std::cos(p.delta * x));
      }
      default: {
        const auto& p = p4_;
        const double a = p.alpha, b = p.beta, g = p.gamma, d = p.delta;
        const double ag2 = (a - g) * (a - g);
        return std::exp(-a * x) * (std::cos(b * x) - (ag2 + d * d - b * b) / (2 * b * (g - a)) * std::sin(b * x)) -
               std::exp(-g * x) * (std::cos(d * x) + (ag2 + b * b - d * d) / (2 * d * (g - a)) * std::sin(d * x));
      }
    }
  }

  /// Kernel value at lag s (seconds), normalization included.
  [[nodiscard]] double operator()(double s) const { return c_ * core(s / tau_q_); }

  /// Smallest s with exp(-rho s / tau_q) below `envelope`.
  [[nodiscard]] double truncation(double envelope) const { return -std::log(envelope) / rho_ * tau_q_; }

private:
  MemoryKernel(int n, double tau_q) : n_(n), tau_q_(tau_q) {}

  static void check(int n, double tau_q) {
    if (n < 1 || n > 4) {
      std::ostringstream os;
      os << "memory kernels exist for flux orders 1..4, got " << n;
      throw OrderOutOfRange(os.str());
    }
    if (!(tau_q > 0.0) || !std::isfinite(tau_q)) throw InvalidArgument("tau_q must be > 0");
  }

  void finish() {
    switch (n_) {
      case 1:
        c_ = 1.0 / tau_q_;
        rho_ = 1.0;
        nu_ = 0.0;
        break;
      case 2:
        c_ = 2.0 / tau_q_;
        rho_ = 1.0;
        nu_ = 1.0;
        break;
      case 3:
        c_ = 6.0 / (tau_q_ * ((p3_.alpha - p3_.gamma) * (p3_.alpha - p3_.gamma) + p3_.delta * p3_.delta));
        rho_ = std::min(p3_.alpha, p3_.gamma);
        nu_ = p3_.delta;
        break;
      default:
        delta4_ = kernel4_delta(p4_);
        c_ = 24.0 / (tau_q_ * delta4_);
        rho_ = std::min(p4_.alpha, p4_.gamma);
        nu_ = std::max(p4_.beta, p4_.delta);
        break;
    }
  }

  int n_;
  double tau_q_;
  Kernel3Params p3_{};
  Kernel4Params p4_{};
  double delta4_ = 0.0;
  double c_ = 0.0;
  double rho_ = 1.0;
  double nu_ = 0.0;
};

inline double kernel_eval(const MemoryKernel& kern, double s) {
  if (!(s >= 0.0)) throw InvalidArgument("kernel lag must be >= 0");
  return kern(s);
}

/// Panel width for oscillatory kernel integrals: one full probe period when
/// that is short, so each panel integrates a whole oscillation and the
/// rounding of the rule cancels; otherwise at most tau_q and half a kernel
/// oscillation.
inline double kernel_panel(const MemoryKernel& kern, double omega) {
  double w = kern.tau_q();
  if (kern.max_frequency() > 0.0) w = std::min(w, std::numbers::pi * kern.tau_q() / kern.max_frequency());
  if (omega > 0.0 && 2.0 * std::numbers::pi / omega <= w) return 2.0 * std::numbers::pi / omega;
  return w;
}

/// Rounds a truncation point up to a whole number of panels.
inline double align_to_panels(double smax, double panel) { return panel * std::ceil(smax / panel); }

/// int_0^inf G(s) exp(-i omega s) ds by adaptive quadrature.
inline cplx kernel_transform(const MemoryKernel& kern, double omega, double abs_tol = 1e-10) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be >= 0");
  // Integrate until the envelope is negligible at double precision; the
  // tail beyond contributes below 1e-18 of the kernel mass.
  const double panel = kernel_panel(kern, omega);
  const double smax = align_to_panels(kern.truncation(1e-18), panel);
  const auto re = integrate_panels([&](double s) { return kern(s) * std::cos(omega * s); }, 0.0, smax, panel, abs_tol);
  const auto im = integrate_panels([&](double s) { return kern(s) * std::sin(omega * s); }, 0.0, smax, panel, abs_tol);
  return {re.value, -im.value};
}

/// Cosine and sine transforms of the n = 3 kernel shape kappa(s/tau_q).
inline std::pair<double, double> kappa_cs_closed_form(double tau_q, double omega,
                                                      const Kernel3Params& p = kPublishedKernel3) {
  const double a = p.alpha, g = p.gamma, d = p.delta;
  const double W = tau_q * tau_q * omega * omega;
  const double D = (g * g + d * d + W) * (g * g + d * d + W) - 4 * d * d * W;
  const double kc = tau_q * (a / (a * a + W) + ((a - 2 * g) * (g * g + d * d) - a * W) / D);
  const double ks = tau_q * tau_q * omega * (1 / (a * a + W) + (d * d - 3 * g * g + 2 * g * a - W) / D);
  return {kc, ks};
}

/// Cosine and sine transforms of the n = 4 kernel shape K(s/tau_q).
inline std::pair<double, double> big_K_cs_closed_form(double tau_q, double omega,
                                                      const Kernel4Params& p = kPublishedKernel4) {
  const double a = p.alpha, b = p.beta, g = p.gamma, d = p.delta;
  const double W = tau_q * tau_q * omega * omega;
  const double a2b2 = a * a + b * b, g2d2 = g * g + d * d;
  const double D1 = W * W + 2 * (a * a - b * b) * W + a2b2 * a2b2;
  const double D2 = W * W + 2 * (g * g - d * d) * W + g2d2 * g2d2;
  const double kc = tau_q / (2 * (g - a)) *
                    (((g2d2 - a2b2) * W - a2b2 * (3 * a * a - b * b + g * g + d * d - 4 * a * g)) / D1 -
                     ((g2d2 - a2b2) * W + g2d2 * (3 * g * g - d * d + a * a + b * b - 4 * a * g)) / D2);
  const double ks = tau_q * tau_q * omega *
                    ((W + a * a - b * b - a / (g - a) * ((g - a) * (g - a) + d * d - b * b)) / D1 -
                     (W + g * g - d * d + g / (g - a) * ((g - a) * (g - a) + b * b - d * d)) / D2);
  return {kc, ks};
}

// ---------------------------------------------------------------------------
// Flux from a gradient history.

/// Gradient history: derivative(t, j) is the j-th time derivative of grad T.
using GradientHistory = std::function<Vec3(double, int)>;

inline GradientHistory sinusoidal_history(const CyclicHistory& h) {
  return [h](double t, int j) { return h.derivative(t, j); };
}

inline GradientHistory constant_history(const Vec3& G) {
  return [G](double, int j) { return j == 0 ? G : Vec3::Zero(); };
}

/// Envelope level at which the flux integral is truncated.
inline constexpr double kFluxTruncation = 1e-12;
/// Longest admissible truncation, in units of tau_q.
inline constexpr double kMaxTruncationLags = 200.0;

/// q(t) = -int_0^smax G(s) k sum_j tau_T^j/j! d^j gradT(t-s) ds.
inline Vec3 flux_from_history(ModelOrder order, const LagPair& lags, const ConductivityTensor& t,
                              const GradientHistory& history, double time, double omega_hint = 0.0,
                              double abs_tol = 1e-10) {
  require_thermo_order(order);
  if (order.n < 1) throw OrderOutOfRange("the fading-memory form needs a flux order n >= 1");
  lags.validate(order);
  const auto kern = MemoryKernel::make(order.n, lags.tau_q);
  const double smax = kern.truncation(kFluxTruncation);
  if (smax > kMaxTruncationLags * lags.tau_q) {
    throw TruncationFailure("kernel truncation beyond 200 tau_q");
  }
  auto driven = [&](double s) {
    Vec3 acc = Vec3::Zero();
    double w = 1.0;
    for (int j = 0; j <= order.m; ++j) {
      if (j > 0) w *= lags.tau_T / j;
      acc += w * history(time - s, j);
    }
    return Vec3(t.k() * acc);
  };
  const double panel = kernel_panel(kern, omega_hint);
  const double upper = align_to_panels(smax, panel);
  Vec3 q;
  for (int i = 0; i < 3; ++i) {
    q[i] = -integrate_panels([&](double s) { return kern(s) * driven(s)[i]; }, 0.0, upper, panel, abs_tol).value;
  }
  return q;
}

}  // namespace lagcheck
