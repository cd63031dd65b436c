#pragma once

// Partial sums e_n(z) = sum_{k<=n} z^k / k! of the exponential series: their
// zeros (the characteristic roots of the order-n flux equation in units of
// x = tau_q * lambda), the stability verdict they imply, and the Szego curve
// the scaled zeros approach as n grows.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lagcheck/errors.hpp"
#include "lagcheck/model.hpp"

namespace lagcheck {

using cplx = std::complex<double>;
using cplx_ld = std::complex<long double>;

/// e_n(z) in nested Horner form 1 + z(1 + z/2(1 + z/3(...))).
template <class C>
C eval_partial_sum(int n, const C& z) {
  C acc(1);
  for (int k = n; k >= 1; --k) acc = C(1) + z * acc / C(static_cast<double>(k));
  return acc;
}

/// |e_n(x)| / sum_k |x|^k/k!: backward-error style residual.
template <class T>
T scaled_residual(int n, const std::complex<T>& x) {
  T term = 1, norm = 1;
  const T ax = std::abs(x);
  for (int k = 1; k <= n; ++k) {
    term *= ax / T(k);
    norm += term;
  }
  return std::abs(eval_partial_sum(n, x)) / norm;
}

enum class StabilityClass { AsymptoticallyStable, Unstable, Marginal };

inline std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::AsymptoticallyStable: return "AsymptoticallyStable";
    case StabilityClass::Unstable: return "Unstable";
    case StabilityClass::Marginal: return "Marginal";
  }
  return "?";
}

/// |abscissa| below this is reported Marginal.
inline constexpr double kMarginalMargin = 1e-9;
/// |Im x| at or below this counts as a real root.
inline constexpr double kRealRootTol = 1e-9;
inline constexpr double kRootResidualTol = 1e-10;

struct StabilityReport {
  int n = 0;
  std::vector<cplx> roots;  // x = tau_q * lambda, sorted by (re, im)
  double spectral_abscissa = 0.0;
  bool ek_satisfied = false;
  int real_root_count = 0;
  StabilityClass classification = StabilityClass::Marginal;
  double max_scaled_residual = 0.0;
};

namespace detail {

/// Monic coefficients n!/k!, k = 0..n-1, of n! e_n(x). Exact integers up to
/// n = 20, long double beyond.
inline std::vector<long double> monic_partial_sum_coefficients(int n) {
  std::vector<long double> a(static_cast<std::size_t>(n));
  if (n <= 20) {
    std::uint64_t v = 1;  // n!/k! built from k = n-1 downward
    for (int k = n - 1; k >= 0; --k) {
      v *= static_cast<std::uint64_t>(k + 1);
      a[static_cast<std::size_t>(k)] = static_cast<long double>(v);
    }
  } else {
    long double v = 1;
    for (int k = n - 1; k >= 0; --k) {
      v *= static_cast<long double>(k + 1);
      a[static_cast<std::size_t>(k)] = v;
    }
  }
  return a;
}

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Parlett-Reinsch balancing restricted to powers of two.
inline void balance(MatrixXld& m) {
  const Eigen::Index dim = m.rows();
  bool changed = true;
  while (changed) {
    changed = false;
    for (Eigen::Index i = 0; i < dim; ++i) {
      long double row = 0, col = 0;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (j == i) continue;
        row += std::abs(m(i, j));
        col += std::abs(m(j, i));
      }
      if (row == 0 || col == 0) continue;
      int e = 0;
      std::frexp(row / col, &e);
      e /= 2;
      if (e == 0) continue;
      const long double f = std::ldexp(1.0L, e);
      if (col * f + row / f < 0.95 * (col + row)) {
        m.row(i) /= f;
        m.col(i) *= f;
        changed = true;
      }
    }
  }
}

inline void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

/// Replaces near-conjugate pairs by an exact conjugate pair and snaps
/// near-real roots onto the axis.
inline std::vector<cplx> symmetrize_conjugates(std::vector<cplx> roots) {
  std::vector<cplx> out;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const cplx z = roots[i];
    if (std::abs(z.imag()) <= kRealRootTol * std::max(1.0, std::abs(z))) {
      out.emplace_back(z.real(), 0.0);
      continue;
    }
    std::size_t best = roots.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - std::conj(z));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == roots.size()) {
      out.emplace_back(z.real(), 0.0);
      continue;
    }
    used[best] = true;
    const cplx mu = 0.5 * (z + std::conj(roots[best]));
    out.push_back(mu);
    out.push_back(std::conj(mu));
  }
  sort_roots(out);
  return out;
}

}  // namespace detail

/// Newton refinement of a root of e_n in long double (e_n' = e_{n-1}), with
/// Maehly deflation against roots already accepted so two starting points
/// cannot settle on the same zero.
inline cplx_ld polish_root(int n, cplx_ld x, const std::vector<cplx_ld>& accepted = {}, int max_iter = 80) {
  for (int it = 0; it < max_iter; ++it) {
    const cplx_ld f = eval_partial_sum(n, x);
    if (f == cplx_ld(0)) break;
    const cplx_ld df = eval_partial_sum(n - 1, x);
    cplx_ld defl(0);
    for (const cplx_ld& r : accepted) defl += cplx_ld(1) / (x - r);
    const cplx_ld denom = df - f * defl;
    if (denom == cplx_ld(0)) break;
    const cplx_ld step = f / denom;
    x -= step;
    if (std::abs(step) <= 4 * std::numeric_limits<long double>::epsilon() * std::abs(x)) break;
  }
  return x;
}

/// Eigenvalues of the balanced companion matrix of e_n(n z), mapped back to x.
inline std::vector<cplx> companion_roots(int n) {
  const auto a = detail::monic_partial_sum_coefficients(n);
  // Scaled variable z = x/n keeps the spectrum inside the unit disk.
  detail::MatrixXld comp = detail::MatrixXld::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  const long double nn = n;
  for (int k = 0; k < n; ++k) {
    const long double scaled = a[static_cast<std::size_t>(k)] / std::pow(nn, static_cast<long double>(n - k));
    comp(k, n - 1) = -scaled;
  }
  detail::balance(comp);
  Eigen::EigenSolver<detail::MatrixXld> es(comp, false);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("companion eigenvalue solve failed");
  }
  std::vector<cplx> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    roots.emplace_back(static_cast<double>(nn * ev.real()), static_cast<double>(nn * ev.imag()));
  }
  return roots;
}

/// Aberth-Ehrlich simultaneous iteration on e_n, long double throughout.
/// Independent of the companion route; used to cross-check it.
inline std::vector<cplx> aberth_roots(int n, int max_iter = 1000) {
  if (n < 1) return {};
  std::vector<cplx_ld> z(static_cast<std::size_t>(n));
  // Product of the roots has modulus n!, so (n!)^(1/n) is a natural radius.
  const long double radius = std::exp(std::lgamma(static_cast<long double>(n) + 1) / n);
  for (int k = 0; k < n; ++k) {
    const long double th = 2 * std::numbers::pi_v<long double> * k / n + 0.4L;
    z[static_cast<std::size_t>(k)] = std::polar(radius, th);
  }
  bool converged = false;
  for (int it = 0; it < max_iter && !converged; ++it) {
    long double max_rel = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      const cplx_ld f = eval_partial_sum(n, z[k]);
      const cplx_ld df = eval_partial_sum(n - 1, z[k]);
      if (f == cplx_ld(0)) continue;
      const cplx_ld ratio = f / df;
      cplx_ld sum(0);
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != k) sum += cplx_ld(1) / (z[k] - z[j]);
      }
      const cplx_ld step = ratio / (cplx_ld(1) - ratio * sum);
      z[k] -= step;
      max_rel = std::max(max_rel, std::abs(step) / std::max<long double>(1, std::abs(z[k])));
    }
    if (max_rel <= 1e-6L) {
      long double worst = 0;
      for (const auto& r : z) worst = std::max(worst, scaled_residual<long double>(n, r));
      converged = worst <= 1e-15L;
    }
  }
  if (!converged) {
    throw ConvergenceFailure("Aberth iteration did not converge for n = " + std::to_string(n));
  }
  std::vector<cplx> out;
  out.reserve(z.size());
  for (const auto& r : z) out.emplace_back(static_cast<double>(r.real()), static_cast<double>(r.imag()));
  return detail::symmetrize_conjugates(std::move(out));
}

/// Largest distance between matched roots of two equally sized root sets.
inline double max_root_set_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const cplx& p, const cplx& q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

inline StabilityClass classify_abscissa(double abscissa) {
  if (abscissa < -kMarginalMargin) return StabilityClass::AsymptoticallyStable;
  if (abscissa > kMarginalMargin) return StabilityClass::Unstable;
  return StabilityClass::Marginal;
}

/// All n zeros of e_n with stability summary. 1 <= n <= 50.
inline StabilityReport characteristic_roots(int n) {
  if (n < 1 || n > kMaxStabilityOrder) {
    throw OrderOutOfRange("characteristic_roots needs 1 <= n <= 50, got " + std::to_string(n));
  }
  std::vector<cplx_ld> accepted;
  accepted.reserve(static_cast<std::size_t>(n));
  for (const cplx& r0 : companion_roots(n)) {
    accepted.push_back(polish_root(n, cplx_ld(r0.real(), r0.imag()), accepted));
  }
  std::vector<cplx> raw;
  raw.reserve(accepted.size());
  for (const cplx_ld& p : accepted) raw.emplace_back(static_cast<double>(p.real()), static_cast<double>(p.imag()));
  StabilityReport rep;
  rep.n = n;
  rep.roots = detail::symmetrize_conjugates(std::move(raw));
  if (rep.roots.size() != static_cast<std::size_t>(n)) {
    throw ConvergenceFailure("root count mismatch for n = " + std::to_string(n));
  }
  for (const cplx& r : rep.roots) {
    const long double res = scaled_residual<long double>(n, cplx_ld(r.real(), r.imag()));
    rep.max_scaled_residual = std::max(rep.max_scaled_residual, static_cast<double>(res));
  }
  if (!(rep.max_scaled_residual <= kRootResidualTol)) {
    std::ostringstream os;
    os << "root residual " << rep.max_scaled_residual << " exceeds " << kRootResidualTol << " for n = " << n;
    throw ConvergenceFailure(os.str());
  }
  rep.spectral_abscissa = -std::numeric_limits<double>::infinity();
  rep.ek_satisfied = true;
  for (const cplx& r : rep.roots) {
    rep.spectral_abscissa = std::max(rep.spectral_abscissa, r.real());
    if (std::abs(r) < 1.0 - 1e-9) rep.ek_satisfied = false;
    if (std::abs(r.imag()) <= kRealRootTol) ++rep.real_root_count;
  }
  rep.classification = classify_abscissa(rep.spectral_abscissa);
  return rep;
}

/// Every root outside the open unit disk (radius 1/tau_q in lambda units).
inline bool enestrom_kakeya_certificate(const StabilityReport& report) {
  return std::all_of(report.roots.begin(), report.roots.end(),
                     [](const cplx& r) { return std::abs(r) >= 1.0 - 1e-9; });
}

inline int real_root_parity(const StabilityReport& report) {
  return static_cast<int>(std::count_if(report.roots.begin(), report.roots.end(),
                                        [](const cplx& r) { return std::abs(r.imag()) <= kRealRootTol; }));
}

// ---------------------------------------------------------------------------
// Szego curve |z exp(1 - z)| = 1, |z| <= 1.

/// Point of the curve on the ray of angle theta. log|z e^{1-z}| = ln rho + 1 -
/// rho cos(theta) is increasing in rho on (0, 1], so bisection is exact.
inline cplx szego_curve_point(double theta) {
  const double c = std::cos(theta);
  auto g = [c](double rho) { return std::log(rho) + 1.0 - rho * c; };
  double lo = 1e-3, hi = 1.0;
  if (g(hi) <= 0.0) return std::polar(1.0, theta);
  for (int i = 0; i < 200 && hi - lo > 1e-12 * 0.25; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::polar(0.5 * (lo + hi), theta);
}

inline std::vector<cplx> szego_curve(int num_points) {
  std::vector<cplx> pts;
  pts.reserve(static_cast<std::size_t>(num_points));
  for (int i = 0; i < num_points; ++i) {
    pts.push_back(szego_curve_point(2.0 * std::numbers::pi * i / num_points));
  }
  return pts;
}

/// | |z e^{1-z}| - 1 |
inline double szego_defect(cplx z) { return std::abs(std::abs(z * std::exp(1.0 - z)) - 1.0); }

struct SzegoSample {
  int n = 0;
  std::vector<cplx> scaled_roots;
  std::vector<cplx> curve_points;
  std::vector<double> distances;  // per scaled root
  double max_distance = 0.0;
};

inline double distance_to_points(cplx z, const std::vector<cplx>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& p : pts) best = std::min(best, std::abs(z - p));
  return best;
}

inline SzegoSample szego_sample(int n, int num_curve_points) {
  if (n < 1) throw OrderOutOfRange("szego_sample needs n >= 1");
  if (num_curve_points < 64) throw InvalidArgument("szego_sample needs at least 64 curve points");
  SzegoSample s;
  s.n = n;
  s.curve_points = szego_curve(num_curve_points);
  for (const cplx& r : characteristic_roots(n).roots) {
    const cplx z = r / static_cast<double>(n);
    s.scaled_roots.push_back(z);
    const double d = distance_to_points(z, s.curve_points);
    s.distances.push_back(d);
    s.max_distance = std::max(s.max_distance, d);
  }
  return s;
}

}  // namespace lagcheck
