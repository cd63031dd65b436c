#pragma once

// Second-Law analysis of the (n, m) dual-phase-lag law on sinusoidal cycles.
//
// For a history T_,i = f cos wt + g sin wt the heat flux settles on the
// transfer function H(iw) = e_m(i w tau_T) / e_n(i w tau_q), and
//
//   int_0^{2pi/w} q.gradT dt = -(pi/w) (f.k.f + g.k.g) Re H(iw)
//                            = -(pi/w) Q P(s^2) / |e_n(i s)|^2,  s = tau_q w,
//
// with P(s^2) = Re[e_m(i r s) conj(e_n(i s))], r = tau_T / tau_q. Only even
// powers of s survive, so P is a polynomial of degree floor((n+m)/2) in
// u = s^2 with P(0) = 1. The model is consistent iff P >= 0 on u > 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <vector>

#include "lagcheck/errors.hpp"
#include "lagcheck/expsum.hpp"
#include "lagcheck/model.hpp"
#include "lagcheck/polynomial.hpp"

namespace lagcheck {

/// Relative tolerance under which a local minimum of P counts as a zero.
inline constexpr double kDoubleRootTol = 1e-8;
/// Looser zero tolerance applied at a located region boundary, which bisection
/// leaves on the edge of the kDoubleRootTol band.
inline constexpr double kBoundaryRootTol = 1e-6;
/// A coefficient that cancels below this fraction of its term magnitudes is an exact zero.
inline constexpr double kCoefficientCleanTol = 1e-12;

namespace detail {

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace detail

/// c_j(r) as polynomials in the delay ratio r, j = 0..floor((n+m)/2):
/// c_j(r) = sum_{k+l=2j, k<=m, l<=n} (-1)^((k-l)/2) r^k / (k! l!).
inline std::vector<Polynomial<double>> positivity_coefficients_in_ratio(ModelOrder order) {
  require_thermo_order(order);
  const int d = (order.n + order.m) / 2;
  std::vector<Polynomial<double>> out;
  for (int j = 0; j <= d; ++j) {
    std::vector<double> rc(static_cast<std::size_t>(order.m + 1), 0.0);
    for (int k = 0; k <= order.m; ++k) {
      const int l = 2 * j - k;
      if (l < 0 || l > order.n) continue;
      const int half = (k - l) / 2;
      const double sign = (((half % 2) + 2) % 2 == 0) ? 1.0 : -1.0;
      rc[static_cast<std::size_t>(k)] += sign / (detail::factorial(k) * detail::factorial(l));
    }
    out.emplace_back(std::move(rc));
  }
  return out;
}

struct PositivityPolynomial {
  ModelOrder order;
  double r = 1.0;
  Polynomial<double> poly;  // in u' = (tau_q w)^2

  [[nodiscard]] const std::vector<double>& coefficients() const { return poly.coefficients(); }
  [[nodiscard]] int degree() const { return poly.degree(); }
  [[nodiscard]] double operator()(double u) const { return poly(u); }
};

/// Coefficients that cancel to within cancel_tol of the sum of their term
/// magnitudes are set to exact zeros. The test is per coefficient, so it is
/// unaffected by rescaling u.
inline PositivityPolynomial build_positivity_polynomial(ModelOrder order, double r,
                                                        double cancel_tol = kCoefficientCleanTol) {
  require_thermo_order(order);
  if (order.m > 0 && !(r > 0.0 && std::isfinite(r))) {
    throw InvalidArgument("delay ratio must be > 0");
  }
  std::vector<double> c;
  for (const auto& cj : positivity_coefficients_in_ratio(order)) {
    const double v = cj(r);
    c.push_back(std::abs(v) <= cancel_tol * cj.abs_eval(r) ? 0.0 : v);
  }
  return {order, r, Polynomial<double>(std::move(c)).trimmed()};
}

/// Steady-state integral of q.gradT over one period of the cycle.
inline double cycle_integral(ModelOrder order, const LagPair& lags, const ConductivityTensor& t,
                             const CyclicHistory& h) {
  require_thermo_order(order);
  lags.validate(order);
  h.validate();
  const double tref = lags.reference_time(order);
  const double s = tref * h.omega;
  const auto P = build_positivity_polynomial(order, lags.effective_ratio(order));
  const double en2 = std::norm(eval_partial_sum(order.n, cplx(0.0, s)));
  return -(std::numbers::pi / h.omega) * quadratic_form(t, h) * P(s * s) / en2;
}

struct PolynomialVerdict {
  VerdictKind kind = VerdictKind::ConsistentStrict;
  std::optional<double> witness_u;
  /// min over critical points of P(u) / sum|c_i| u^i (+inf when none).
  double min_relative = std::numeric_limits<double>::infinity();
};

/// Sign of P on (0, inf) decided from the isolated real roots of P and P'.
inline PolynomialVerdict classify_polynomial(const Polynomial<double>& p_in, double zero_tol = kDoubleRootTol) {
  const Polynomial<double> p = p_in.trimmed();
  PolynomialVerdict v;
  if (p.degree() == 0) {
    if (p[0] > 0.0) return v;
    v.kind = VerdictKind::Inconsistent;
    v.witness_u = 1.0;
    return v;
  }
  if (p.leading() < 0.0) {
    // P -> -inf: past the last sign change the integral stays positive.
    const auto roots = positive_roots(p);
    const double last = roots.empty() ? 1.0 : roots.back();
    v.kind = VerdictKind::Inconsistent;
    v.witness_u = last * (1.0 + 1e-6);
    v.min_relative = -std::numeric_limits<double>::infinity();
    return v;
  }
  double best_u = 0.0;
  for (double u : positive_roots(p.derivative())) {
    const double rel = p(u) / p.abs_eval(u);
    if (rel < v.min_relative) {
      v.min_relative = rel;
      best_u = u;
    }
  }
  if (v.min_relative > zero_tol) return v;
  v.kind = v.min_relative >= -zero_tol ? VerdictKind::ConsistentWeak : VerdictKind::Inconsistent;
  v.witness_u = best_u;
  return v;
}

/// Second-Law verdict for the (n, m) law with the given lags. The verdict
/// depends on r = tau_T / tau_q only; the witness frequency scales with
/// 1 / reference time.
inline ConsistencyVerdict classify(ModelOrder order, const LagPair& lags) {
  require_thermo_order(order);
  lags.validate(order);
  const auto P = build_positivity_polynomial(order, lags.effective_ratio(order));
  const auto pv = classify_polynomial(P.poly);
  ConsistencyVerdict out;
  out.kind = pv.kind;
  if (pv.witness_u) out.witness_omega = std::sqrt(*pv.witness_u) / lags.reference_time(order);
  return out;
}

// ---------------------------------------------------------------------------
// Admissible delay-ratio regions.

enum class BoundKind { Open, Closed, Unbounded };

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Open: return "open";
    case BoundKind::Closed: return "closed";
    case BoundKind::Unbounded: return "unbounded";
  }
  return "?";
}

struct RatioInterval {
  double low = 0.0;
  double high = std::numeric_limits<double>::infinity();
  BoundKind low_kind = BoundKind::Open;
  BoundKind high_kind = BoundKind::Unbounded;

  [[nodiscard]] bool contains(double r) const {
    const bool above = low_kind == BoundKind::Closed ? r >= low : r > low;
    const bool below = high_kind == BoundKind::Unbounded ? true : (high_kind == BoundKind::Closed ? r <= high : r < high);
    return above && below;
  }
};

struct AdmissibleRegion {
  ModelOrder order;
  Mode mode = Mode::Weak;
  std::vector<RatioInterval> intervals;

  [[nodiscard]] bool empty() const { return intervals.empty(); }
  [[nodiscard]] bool contains(double r) const {
    return std::any_of(intervals.begin(), intervals.end(), [r](const auto& iv) { return iv.contains(r); });
  }
  /// One interval covering all of (0, inf).
  [[nodiscard]] bool unconditional() const {
    return intervals.size() == 1 && intervals[0].low == 0.0 && intervals[0].high_kind == BoundKind::Unbounded;
  }
};

/// Image of a region under r -> 1/r (the gradient-side view).
inline AdmissibleRegion reciprocal_region(const AdmissibleRegion& reg) {
  AdmissibleRegion out{reg.order.dual(), reg.mode, {}};
  for (auto it = reg.intervals.rbegin(); it != reg.intervals.rend(); ++it) {
    RatioInterval iv;
    if (it->high_kind == BoundKind::Unbounded) {
      iv.low = 0.0;
      iv.low_kind = BoundKind::Open;
    } else {
      iv.low = 1.0 / it->high;
      iv.low_kind = it->high_kind;
    }
    if (it->low == 0.0) {
      iv.high = std::numeric_limits<double>::infinity();
      iv.high_kind = BoundKind::Unbounded;
    } else {
      iv.high = 1.0 / it->low;
      iv.high_kind = it->low_kind;
    }
    out.intervals.push_back(iv);
  }
  return out;
}

struct RegionOptions {
  double r_max = 100.0;
  double tol = 1e-6;
  Mode mode = Mode::Weak;
  int grid_points = 4096;
  bool keep_sweep = false;
};

struct SweepPoint {
  double r;
  VerdictKind kind;
};

struct RegionResult {
  AdmissibleRegion region;
  /// Where the top coefficient c_d(r) is positive: a necessary condition.
  std::vector<RatioInterval> leading_coefficient_intervals;
  std::vector<SweepPoint> sweep;
};

namespace detail {

inline bool admissible_at(ModelOrder order, double r, Mode mode) {
  const auto P = build_positivity_polynomial(order, r);
  return ConsistencyVerdict{classify_polynomial(P.poly).kind, {}}.admissible(mode);
}

/// Whether the boundary ratio itself belongs to the region: decided on the
/// limit polynomial, whose vanishing coefficients are cleaned to exact zeros.
inline bool boundary_admissible(ModelOrder order, double r, Mode mode) {
  const auto P = build_positivity_polynomial(order, r, 1e-9);
  const auto kind = classify_polynomial(P.poly, kBoundaryRootTol).kind;
  return ConsistencyVerdict{kind, {}}.admissible(mode);
}

/// Bisects a transition between admissible(lo) != admissible(hi).
inline double refine_transition(ModelOrder order, double lo, double hi, Mode mode) {
  const bool at_lo = admissible_at(order, lo, mode);
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (admissible_at(order, mid, mode) == at_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Positive-sign intervals of a polynomial in r on (0, inf).
inline std::vector<RatioInterval> positive_sign_intervals(const Polynomial<double>& p_in) {
  const auto p = p_in.cleaned(kCoefficientCleanTol);
  std::vector<double> cuts{0.0};
  if (p.degree() > 0) {
    for (double x : positive_roots(p)) cuts.push_back(x);
  }
  cuts.push_back(std::numeric_limits<double>::infinity());
  std::vector<RatioInterval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double probe = std::isinf(b) ? (a == 0.0 ? 1.0 : 2.0 * a) : 0.5 * (a + b);
    if (!(p(probe) > 0.0)) continue;
    RatioInterval iv{a, b, BoundKind::Open, std::isinf(b) ? BoundKind::Unbounded : BoundKind::Open};
    if (!out.empty() && out.back().high == a) {
      out.back().high = b;  // touching zero of even multiplicity
      out.back().high_kind = iv.high_kind;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace detail

/// Scans r on a logarithmic grid over [1/r_max, r_max], refines every verdict
/// change by bisection and records whether each boundary ratio is admissible.
inline RegionResult admissible_region(ModelOrder order, const RegionOptions& opt = {}) {
  require_thermo_order(order);
  if (!(opt.r_max >= 10.0)) throw InvalidArgument("r_max must be >= 10");
  if (!(opt.tol > 0.0 && opt.tol <= 1e-4)) throw InvalidArgument("tol must lie in (0, 1e-4]");
  if (opt.grid_points < 16) throw InvalidArgument("grid needs at least 16 points");

  const int N = opt.grid_points;
  const double lmin = -std::log(opt.r_max), lmax = std::log(opt.r_max);
  std::vector<double> rs(static_cast<std::size_t>(N));
  std::vector<bool> ok(static_cast<std::size_t>(N));
  RegionResult res;
  res.region.order = order;
  res.region.mode = opt.mode;
  for (int i = 0; i < N; ++i) {
    const double r = std::exp(lmin + (lmax - lmin) * i / (N - 1));
    rs[static_cast<std::size_t>(i)] = r;
    const auto kind = classify_polynomial(build_positivity_polynomial(order, r).poly).kind;
    ok[static_cast<std::size_t>(i)] = ConsistencyVerdict{kind, {}}.admissible(opt.mode);
    if (opt.keep_sweep) res.sweep.push_back({r, kind});
  }

  // Transitions, including any hidden inside a cell next to a detected one.
  struct Transition {
    double r;
    bool entering;  // admissible above r
  };
  std::vector<Transition> transitions;
  for (int i = 0; i + 1 < N; ++i) {
    const auto a = static_cast<std::size_t>(i), b = a + 1;
    const bool near_change = ok[a] != ok[b] || (i > 0 && ok[a - 1] != ok[a]) || (b + 1 < ok.size() && ok[b] != ok[b + 1]);
    if (!near_change) continue;
    // Fine scan of the cell with relative step tol (capped).
    const double span = std::log(rs[b] / rs[a]);
    const int sub = std::clamp(static_cast<int>(std::ceil(span / opt.tol)), 1, 512);
    double prev_r = rs[a];
    bool prev_ok = ok[a];
    for (int j = 1; j <= sub; ++j) {
      const double r = j == sub ? rs[b] : rs[a] * std::exp(span * j / sub);
      const bool cur = j == sub ? static_cast<bool>(ok[b]) : detail::admissible_at(order, r, opt.mode);
      if (cur != prev_ok) {
        transitions.push_back({detail::refine_transition(order, prev_r, r, opt.mode), cur});
      }
      prev_r = r;
      prev_ok = cur;
    }
  }
  std::sort(transitions.begin(), transitions.end(), [](const auto& x, const auto& y) { return x.r < y.r; });

  auto kind_at = [&](double r) {
    return detail::boundary_admissible(order, r, opt.mode) ? BoundKind::Closed : BoundKind::Open;
  };
  std::optional<RatioInterval> open_iv;
  if (ok.front()) open_iv = RatioInterval{0.0, 0.0, BoundKind::Open, BoundKind::Open};
  for (const auto& tr : transitions) {
    if (tr.entering) {
      if (!open_iv) open_iv = RatioInterval{tr.r, 0.0, kind_at(tr.r), BoundKind::Open};
    } else if (open_iv) {
      open_iv->high = tr.r;
      open_iv->high_kind = kind_at(tr.r);
      res.region.intervals.push_back(*open_iv);
      open_iv.reset();
    }
  }
  if (open_iv) {
    open_iv->high = std::numeric_limits<double>::infinity();
    open_iv->high_kind = BoundKind::Unbounded;
    res.region.intervals.push_back(*open_iv);
  }

  const auto coeffs = positivity_coefficients_in_ratio(order);
  res.leading_coefficient_intervals = detail::positive_sign_intervals(coeffs.back());
  return res;
}

// ---------------------------------------------------------------------------
// Closed-form regions published for individual (n, m) cases.

struct KnownRegion {
  AdmissibleRegion region;
  /// True when the closed form is only the leading-coefficient condition.
  bool necessary_only = false;
};

inline std::optional<KnownRegion> known_region_oracle(ModelOrder order) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  using BK = BoundKind;
  auto make = [&](std::vector<RatioInterval> ivs, bool necessary_only = false) {
    return KnownRegion{AdmissibleRegion{order, Mode::Weak, std::move(ivs)}, necessary_only};
  };
  const RatioInterval all{0.0, inf, BK::Open, BK::Unbounded};
  const int n = order.n, m = order.m;
  if ((n == 0 && m == 0) || (n == 1 && m == 0) || (n == 0 && m == 1) || (n == 1 && m == 1)) return make({all});
  if (n == 2 && m == 1) return make({{0.5, inf, BK::Closed, BK::Unbounded}});  // tau_q <= 2 tau_T
  if (n == 1 && m == 2) return make({{0.0, 2.0, BK::Open, BK::Closed}});       // tau_T <= 2 tau_q
  if (n == 2 && m == 2) {
    const double s3 = std::sqrt(3.0);
    return make({{2.0 - s3, 2.0 + s3, BK::Open, BK::Open}});
  }
  if (n == 2 && m == 3) return make({{0.28441, 1.4902, BK::Open, BK::Closed}});
  if (n == 3 && m == 2) return make({{1.0 / 1.4902, 1.0 / 0.28441, BK::Closed, BK::Open}});
  if (n == 3 && m == 4) return make({{0.0, 1.33332, BK::Open, BK::Open}}, true);
  if (n == 4 && m == 3) return make({{1.0 / 1.33332, inf, BK::Open, BK::Unbounded}}, true);
  if ((n == 3 && m == 3) || (n == 4 && m == 4)) return std::nullopt;
  if (n >= 0 && m >= 0 && n <= 4 && m <= 4) return make({});
  return std::nullopt;
}

}  // namespace lagcheck
