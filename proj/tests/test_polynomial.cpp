#include <catch2/catch_amalgamated.hpp>

#include "lagcheck/polynomial.hpp"

using namespace lagcheck;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Ascending coefficients of prod (x - r_i).
Polynomial<double> from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] -= r * c[i];
      next[i + 1] += c[i];
    }
    c = next;
  }
  return Polynomial<double>(c);
}

}  // namespace

TEST_CASE("evaluation, derivative and trimming") {
  const Polynomial<double> p{1.0, -3.0, 2.0};  // 1 - 3x + 2x^2
  CHECK(p(0.0) == 1.0);
  CHECK(p(2.0) == 3.0);
  CHECK(p.derivative() == Polynomial<double>{-3.0, 4.0});
  CHECK(p.abs_eval(-1.0) == 6.0);
  CHECK(Polynomial<double>{1.0, 2.0, 0.0}.trimmed().degree() == 1);
  CHECK(Polynomial<double>{1.0, 1e-20, 1e-20}.cleaned(1e-12) == Polynomial<double>{1.0});
  const auto z = p(std::complex<double>(0.0, 1.0));
  CHECK(z == std::complex<double>(-1.0, -3.0));
}

TEST_CASE("Descartes isolation finds simple positive roots") {
  const auto p = from_roots({0.5, 2.0, 3.0, -1.0, -4.0});
  const auto iv = isolate_positive_roots(p);
  REQUIRE(iv.size() == 3);
  const auto r = positive_roots(p);
  REQUIRE(r.size() == 3);
  CHECK_THAT(r[0], WithinRel(0.5, 1e-14));
  CHECK_THAT(r[1], WithinRel(2.0, 1e-14));
  CHECK_THAT(r[2], WithinRel(3.0, 1e-14));
}

TEST_CASE("roots at the origin and negative roots are ignored") {
  const auto p = from_roots({0.0, 0.0, 1.5, -2.0});
  const auto r = positive_roots(p);
  REQUIRE(r.size() == 1);
  CHECK_THAT(r[0], WithinRel(1.5, 1e-14));
  CHECK(positive_roots(from_roots({-1.0, -2.0})).empty());
  CHECK(positive_roots(Polynomial<double>{1.0, 0.0, 1.0}).empty());
}

TEST_CASE("close and double roots are bracketed") {
  // Close pair separated by 1e-6; conditioning limits accuracy to ~eps/1e-6.
  const auto close = positive_roots(from_roots({1.0, 1.0 + 1e-6}));
  REQUIRE(close.size() == 2);
  CHECK_THAT(close[0], WithinAbs(1.0, 1e-9));
  CHECK_THAT(close[1], WithinAbs(1.0 + 1e-6, 1e-9));
  // A double root is reported near its location (as a cluster or minimizer).
  const auto dbl = positive_roots(from_roots({2.0, 2.0}));
  REQUIRE_FALSE(dbl.empty());
  for (double x : dbl) CHECK_THAT(x, WithinAbs(2.0, 1e-6));
}

TEST_CASE("isolation agrees with a dense sign scan") {
  // Wilkinson-like product with well-separated roots.
  std::vector<double> roots;
  for (int i = 1; i <= 8; ++i) roots.push_back(0.25 * i);
  const auto p = from_roots(roots);
  int changes = 0;
  double prev = p(1e-3);
  for (int i = 1; i <= 20000; ++i) {
    const double x = 1e-3 + 3.0 * i / 20000;
    const double v = p(x);
    if ((v > 0) != (prev > 0)) ++changes;
    prev = v;
  }
  CHECK(changes == 8);
  CHECK(positive_roots(p).size() == 8);
}

TEST_CASE("cauchy bound encloses every root") {
  const auto p = from_roots({0.1, 7.0, -9.0});
  CHECK(cauchy_bound(p) >= 9.0);
}
