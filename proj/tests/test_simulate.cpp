#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lagcheck/expsum.hpp"
#include "lagcheck/simulate.hpp"

using namespace lagcheck;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> random_init(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (double& v : y) v = U(rng);
  return y;
}

}  // namespace

TEST_CASE("n = 1 tracks exp(-t / tau_q) to RK4 accuracy") {
  const auto tr = free_decay(1, 2.0, {1.0});
  CHECK(tr.outcome == Outcome::Decayed);
  REQUIRE(tr.times.size() == tr.values.size());
  CHECK_THAT(tr.times.back(), WithinRel(200.0, 1e-12));
  for (std::size_t i = 0; i < tr.times.size(); i += 500) {
    CHECK_THAT(tr.values[i], WithinRel(std::exp(-tr.times[i] / 2.0), 1e-6));
  }
  CHECK_THAT(tr.fitted_rate, WithinRel(-0.5, 1e-6));
}

TEST_CASE("outcome dichotomy and fitted rates") {
  std::mt19937_64 rng(42);
  for (int n = 1; n <= kMaxSimulateOrder; ++n) {
    const double a = characteristic_roots(n).spectral_abscissa;
    for (int k = 0; k < 3; ++k) {
      const double tq = 0.5;
      const auto tr = free_decay(n, tq, random_init(n, rng));
      INFO("n = " << n);
      CHECK(tr.outcome == (n <= 4 ? Outcome::Decayed : Outcome::BlewUp));
      CHECK_THAT(tr.fitted_rate, WithinRel(a / tq, 0.05));
    }
  }
}

TEST_CASE("free_decay argument checks") {
  CHECK_THROWS_AS(free_decay(0, 1.0, {}), OrderOutOfRange);
  CHECK_THROWS_AS(free_decay(11, 1.0, std::vector<double>(11, 1.0)), OrderOutOfRange);
  CHECK_THROWS_AS(free_decay(2, 1.0, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(free_decay(2, 1.0, {0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(free_decay(2, -1.0, {1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(free_decay(2, 1.0, {1.0, 0.0}, 10.0, 0.05), StepTooLarge);
  CHECK_NOTHROW(free_decay(2, 1.0, {1.0, 0.0}, 10.0, 0.02));
}

TEST_CASE("a short horizon leaves the outcome inconclusive") {
  const auto tr = free_decay(4, 1.0, {1.0, 0.0, 0.0, 0.0}, 2.0);
  CHECK(tr.outcome == Outcome::Inconclusive);
  CHECK(to_string(tr.outcome) == "Inconclusive");
}

TEST_CASE("least-squares slope of a straight line") {
  CHECK_THAT(detail::least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7}), WithinAbs(2.0, 1e-14));
  CHECK(detail::least_squares_slope({1, 1}, {0, 5}) == 0.0);
}
