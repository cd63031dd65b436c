#pragma once

// Dense univariate polynomials with ascending coefficients and positive
// real-root isolation by Descartes' rule of signs (Vincent-Collins-Akritas
// bisection).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lagcheck {

template <class T>
class Polynomial {
public:
  using value_type = T;

  Polynomial() : c_{T(0)} {}
  Polynomial(std::initializer_list<T> coeffs) : c_(coeffs) {
    if (c_.empty()) c_.push_back(T(0));
  }
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(T(0));
  }

  /// Degree of the stored representation (leading zeros are not trimmed).
  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] const std::vector<T>& coefficients() const { return c_; }
  [[nodiscard]] T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
  [[nodiscard]] T leading() const { return c_.back(); }

  template <class U>
  [[nodiscard]] U operator()(const U& x) const {
    U acc = U(c_.back());
    for (auto it = c_.rbegin() + 1; it != c_.rend(); ++it) acc = acc * x + U(*it);
    return acc;
  }

  /// sum |c_i| |x|^i; the magnitude against which rounding in p(x) is judged.
  [[nodiscard]] T abs_eval(T x) const {
    const T ax = std::abs(x);
    T acc = std::abs(c_.back());
    for (auto it = c_.rbegin() + 1; it != c_.rend(); ++it) acc = acc * ax + std::abs(*it);
    return acc;
  }

  [[nodiscard]] Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial{T(0)};
    std::vector<T> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = T(i) * c_[i];
    return Polynomial(std::move(d));
  }

  /// Drops leading coefficients with |c| <= rel * max|c|.
  [[nodiscard]] Polynomial trimmed(T rel = T(0)) const {
    T scale = T(0);
    for (T v : c_) scale = std::max(scale, std::abs(v));
    std::vector<T> out = c_;
    while (out.size() > 1 && std::abs(out.back()) <= rel * scale) out.pop_back();
    return Polynomial(std::move(out));
  }

  /// Zeroes every coefficient with |c| <= rel * max|c|, then trims.
  [[nodiscard]] Polynomial cleaned(T rel) const {
    T scale = T(0);
    for (T v : c_) scale = std::max(scale, std::abs(v));
    std::vector<T> out = c_;
    for (T& v : out) {
      if (std::abs(v) <= rel * scale) v = T(0);
    }
    return Polynomial(std::move(out)).trimmed();
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  std::vector<T> c_;
};

namespace detail {

template <class T>
int sign_variations(const std::vector<T>& c) {
  int count = 0;
  int last = 0;
  for (T v : c) {
    const int s = (v > T(0)) - (v < T(0));
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

/// Coefficients of p(a + (b - a) y).
template <class T>
std::vector<T> affine_substitute(const std::vector<T>& p, T a, T w) {
  // Horner in polynomial arithmetic: acc = acc * (a + w y) + p_i.
  std::vector<T> acc{p.back()};
  for (auto it = p.rbegin() + 1; it != p.rend(); ++it) {
    std::vector<T> next(acc.size() + 1, T(0));
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i] * a;
      next[i + 1] += acc[i] * w;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return acc;
}

/// Sign variations of (1+x)^d p1(1/(1+x)): bounds the roots of p1 in (0, 1).
template <class T>
int descartes_unit_interval(const std::vector<T>& p1) {
  std::vector<T> q(p1.rbegin(), p1.rend());
  // Taylor shift x -> x + 1.
  const std::size_t n = q.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) q[j - 1] += q[j];
  }
  return sign_variations(q);
}

}  // namespace detail

/// Interval (lo, hi) holding exactly one positive root, or a cluster of roots
/// too tight to separate at the working precision.
template <class T>
struct RootInterval {
  T lo;
  T hi;
  bool cluster = false;
};

/// Upper bound on the moduli of the roots (Cauchy).
template <class T>
T cauchy_bound(const Polynomial<T>& p) {
  const auto& c = p.coefficients();
  T m = T(0);
  for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i] / c.back()));
  return T(1) + m;
}

/// Isolates the roots of p on (0, inf). The leading coefficient must be
/// nonzero; a root exactly at 0 is ignored.
template <class T>
std::vector<RootInterval<T>> isolate_positive_roots(const Polynomial<T>& p_in, T rel_width = T(1e-13)) {
  Polynomial<T> p = p_in.trimmed();
  std::vector<T> c = p.coefficients();
  // Remove roots at the origin.
  std::size_t z = 0;
  while (z + 1 < c.size() && c[z] == T(0)) ++z;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(z));
  std::vector<RootInterval<T>> out;
  if (c.size() <= 1) return out;
  p = Polynomial<T>(c);
  if (detail::sign_variations(c) == 0) return out;

  const T bound = cauchy_bound(p);
  struct Job {
    T a, b;
  };
  std::vector<Job> stack{{T(0), bound}};
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const auto sub = detail::affine_substitute(c, job.a, job.b - job.a);
    const int v = detail::descartes_unit_interval(sub);
    if (v == 0) continue;
    if (v == 1) {
      out.push_back({job.a, job.b, false});
      continue;
    }
    const T mid = job.a + (job.b - job.a) / T(2);
    if (job.b - job.a <= rel_width * job.b || !(mid > job.a && mid < job.b)) {
      out.push_back({job.a, job.b, true});
      continue;
    }
    if (p(mid) == T(0)) {
      out.push_back({mid, mid, false});
      // Shrink the halves away from the exact root.
      const T eps = (job.b - job.a) * T(1e-9);
      stack.push_back({mid + eps, job.b});
      stack.push_back({job.a, mid - eps});
      continue;
    }
    stack.push_back({mid, job.b});
    stack.push_back({job.a, mid});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  return out;
}

/// Bisects a sign-changing bracket down to adjacent floating-point numbers.
template <class T, class F>
T bisect_root(F&& f, T lo, T hi, int max_iter = 400) {
  T flo = f(lo);
  if (flo == T(0)) return lo;
  for (int i = 0; i < max_iter; ++i) {
    const T mid = lo + (hi - lo) / T(2);
    if (!(mid > lo && mid < hi)) break;
    const T fm = f(mid);
    if (fm == T(0)) return mid;
    if ((fm > T(0)) == (flo > T(0))) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / T(2);
}

/// Positive roots of p, refined to working precision. Clusters are reported
/// by their midpoint.
template <class T>
std::vector<T> positive_roots(const Polynomial<T>& p_in) {
  // Divide out x^z so a root at the origin cannot pin the bracket endpoints.
  std::vector<T> c = p_in.trimmed().coefficients();
  std::size_t z = 0;
  while (z + 1 < c.size() && c[z] == T(0)) ++z;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(z));
  const Polynomial<T> p(std::move(c));
  std::vector<T> roots;
  for (const auto& iv : isolate_positive_roots(p)) {
    if (iv.cluster || iv.lo == iv.hi) {
      roots.push_back(iv.lo + (iv.hi - iv.lo) / T(2));
      continue;
    }
    const T flo = p(iv.lo);
    const T fhi = p(iv.hi);
    if ((flo > T(0)) != (fhi > T(0)) || flo == T(0) || fhi == T(0)) {
      roots.push_back(bisect_root([&](T x) { return p(x); }, iv.lo, iv.hi));
    } else {
      // One simple root but no sign change seen: rounding at an endpoint.
      // Fall back to the minimizer of |p| by golden section.
      T a = iv.lo, b = iv.hi;
      const T g = (std::sqrt(T(5)) - T(1)) / T(2);
      for (int i = 0; i < 200; ++i) {
        const T x1 = b - g * (b - a);
        const T x2 = a + g * (b - a);
        if (std::abs(p(x1)) < std::abs(p(x2))) b = x2; else a = x1;
      }
      roots.push_back(a + (b - a) / T(2));
    }
  }
  return roots;
}

}  // namespace lagcheck
