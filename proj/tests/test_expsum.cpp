#include <catch2/catch_amalgamated.hpp>

#include <boost/math/special_functions/lambert_w.hpp>

#include "lagcheck/expsum.hpp"

using namespace lagcheck;
using Catch::Matchers::WithinAbs;

namespace {

bool has_root(const StabilityReport& rep, cplx want, double tol) {
  for (const cplx& r : rep.roots) {
    if (std::abs(r.real() - want.real()) <= tol && std::abs(r.imag() - want.imag()) <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("eval_partial_sum examples") {
  CHECK(eval_partial_sum(2, cplx(0.0, 0.0)) == cplx(1.0, 0.0));
  CHECK(eval_partial_sum(1, cplx(-1.0, 0.0)) == cplx(0.0, 0.0));
  CHECK(std::abs(eval_partial_sum(3, cplx(-1.5961, 0.0))) <= 5e-4);
  CHECK(eval_partial_sum(0, cplx(3.0, 4.0)) == cplx(1.0, 0.0));
  // Converges to exp for large n.
  CHECK(std::abs(eval_partial_sum(30, cplx(0.5, 1.0)) - std::exp(cplx(0.5, 1.0))) <= 1e-14);
}

TEST_CASE("tabulated roots for n = 1..4") {
  CHECK(has_root(characteristic_roots(1), {-1.0, 0.0}, 5e-4));
  const auto r2 = characteristic_roots(2);
  CHECK(has_root(r2, {-1.0, 1.0}, 5e-4));
  CHECK(has_root(r2, {-1.0, -1.0}, 5e-4));
  const auto r3 = characteristic_roots(3);
  CHECK(has_root(r3, {-1.5961, 0.0}, 5e-4));
  CHECK(has_root(r3, {-0.70196, 1.8073}, 5e-4));
  CHECK(has_root(r3, {-0.70196, -1.8073}, 5e-4));
  const auto r4 = characteristic_roots(4);
  for (double s : {1.0, -1.0}) {
    CHECK(has_root(r4, {-0.27056, s * 2.5048}, 5e-4));
    CHECK(has_root(r4, {-1.7294, s * 0.88897}, 5e-4));
  }
}

TEST_CASE("residual, conjugate closure and root count for n <= 50") {
  for (int n = 1; n <= kMaxStabilityOrder; ++n) {
    const auto rep = characteristic_roots(n);
    REQUIRE(rep.roots.size() == static_cast<std::size_t>(n));
    CHECK(rep.max_scaled_residual <= kRootResidualTol);
    for (const cplx& r : rep.roots) {
      double best = 1e300;
      for (const cplx& s : rep.roots) best = std::min(best, std::abs(s - std::conj(r)));
      CHECK(best <= 1e-9);
    }
  }
}

TEST_CASE("stability dichotomy, Enestrom-Kakeya and real-root parity") {
  for (int n = 1; n <= kMaxStabilityOrder; ++n) {
    const auto rep = characteristic_roots(n);
    INFO("n = " << n);
    if (n <= 4) {
      CHECK(rep.spectral_abscissa < 0.0);
      CHECK(rep.classification == StabilityClass::AsymptoticallyStable);
    } else {
      CHECK(rep.spectral_abscissa > 0.0);
      CHECK(rep.classification == StabilityClass::Unstable);
    }
    CHECK(enestrom_kakeya_certificate(rep));
    CHECK(real_root_parity(rep) == n % 2);
  }
  CHECK(characteristic_roots(5).spectral_abscissa > 0.2);
  CHECK(real_root_parity(characteristic_roots(7)) == 1);
}

TEST_CASE("companion pipeline agrees with simultaneous iteration") {
  for (int n : {2, 5, 10, 20, 35, 50}) {
    INFO("n = " << n);
    const auto a = characteristic_roots(n).roots;
    const auto b = aberth_roots(n);
    CHECK(max_root_set_distance(a, b) <= 1e-7);
  }
}

TEST_CASE("order outside 1..50 is rejected") {
  CHECK_THROWS_AS(characteristic_roots(0), OrderOutOfRange);
  CHECK_THROWS_AS(characteristic_roots(51), OrderOutOfRange);
}

TEST_CASE("classification margin") {
  CHECK(classify_abscissa(-1e-3) == StabilityClass::AsymptoticallyStable);
  CHECK(classify_abscissa(1e-3) == StabilityClass::Unstable);
  CHECK(classify_abscissa(1e-10) == StabilityClass::Marginal);
}

TEST_CASE("Szego curve points satisfy the defining equation") {
  for (const cplx& z : szego_curve(720)) {
    CHECK(szego_defect(z) <= 1e-9);
    CHECK(std::abs(z) <= 1.0 + 1e-9);
  }
}

TEST_CASE("Szego distance for n = 1 against the closed-form gap") {
  // On the negative axis the curve sits at -rho with rho e^rho = 1/e.
  const double rho = boost::math::lambert_w0(std::exp(-1.0));
  const auto s = szego_sample(1, 4096);
  REQUIRE(s.scaled_roots.size() == 1);
  CHECK_THAT(s.scaled_roots[0].real(), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(s.max_distance, WithinAbs(1.0 - rho, 1e-6));
}

TEST_CASE("scaled roots approach the Szego curve") {
  const double d10 = szego_sample(10, 2048).max_distance;
  const double d25 = szego_sample(25, 2048).max_distance;
  const double d50 = szego_sample(50, 2048).max_distance;
  CHECK(d25 < d10);
  CHECK(d50 < d25);
  CHECK_THROWS_AS(szego_sample(5, 10), InvalidArgument);
}
