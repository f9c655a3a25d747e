#include "lkg/error.hpp"
#include "lkg/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lkg;
using namespace lkg::potential;
using std::numbers::pi;

TEST_CASE("cosine potential evaluates to 2 lambda cos theta") {
  const auto V = TrigPolynomialPotential::cosine(1, 0.3);
  for (double th : {0.0, 0.4, 1.7, 3.0, -2.2}) {
    const std::vector<double> t{th};
    CHECK(evaluate(V, t) == doctest::Approx(0.6 * std::cos(th)).epsilon(1e-14));
    CHECK(std::abs(V.evaluate_complex(t).imag()) < 1e-15);
  }
}

TEST_CASE("two-dimensional cosine sums both directions") {
  const auto V = TrigPolynomialPotential::cosine(2, 0.1);
  const std::vector<double> t{0.3, 1.1};
  CHECK(evaluate(V, t) == doctest::Approx(0.2 * (std::cos(0.3) + std::cos(1.1))).epsilon(1e-14));
}

TEST_CASE("zero potential") {
  const auto V = TrigPolynomialPotential::zero(1);
  CHECK(V.is_zero());
  const std::vector<double> t{1.0};
  CHECK(evaluate(V, t) == 0.0);
  CHECK(analytic_majorant(V) == 0.0);
}

TEST_CASE("reality condition is enforced") {
  using Term = TrigPolynomialPotential::Term;
  CHECK_THROWS_AS(TrigPolynomialPotential(1, {Term{{1}, {0.1, 0.0}}}, 0.5), ConfigError);
  CHECK_THROWS_AS(TrigPolynomialPotential(1, {Term{{1}, {0.1, 0.2}}, Term{{-1}, {0.1, 0.2}}}, 0.5),
                  ConfigError);
  CHECK_NOTHROW(TrigPolynomialPotential(1, {Term{{1}, {0.1, 0.2}}, Term{{-1}, {0.1, -0.2}}}, 0.5));
}

TEST_CASE("duplicate and mis-sized indices are rejected") {
  using Term = TrigPolynomialPotential::Term;
  CHECK_THROWS_AS(TrigPolynomialPotential(1, {Term{{1}, 0.1}, Term{{1}, 0.1}, Term{{-1}, 0.1}}, 0.5),
                  ConfigError);
  CHECK_THROWS_AS(TrigPolynomialPotential(2, {Term{{1}, 0.1}}, 0.5), ConfigError);
}

TEST_CASE("evaluate rejects a theta of the wrong dimension") {
  const auto V = TrigPolynomialPotential::cosine(2, 0.1);
  const std::vector<double> t{0.3};
  CHECK_THROWS_AS(evaluate(V, t), DimensionError);
}

TEST_CASE("analytic majorant of the cosine is 2 lambda e^r") {
  const auto V = TrigPolynomialPotential::cosine(1, 0.05, 0.5);
  CHECK(analytic_majorant(V) == doctest::Approx(0.1 * std::exp(0.5)).epsilon(1e-14));
  CHECK(analytic_majorant(V, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("golden frequency has a positive Diophantine margin") {
  FrequencyVector w{{pi * (std::sqrt(5.0) - 1.0)}, 1.0, 10};
  CHECK_NOTHROW(validate(w));
  const auto m = diophantine_margin(w);
  CHECK(m.gamma_eff > 0.0);
  // brute force over the same box
  double best = INFINITY;
  for (int k = -10; k <= 10; ++k) {
    if (k == 0) continue;
    const double x = k * w.omega[0];
    best = std::min(best, std::abs(k) * std::abs(x - pi * std::round(x / pi)));
  }
  CHECK(m.gamma_eff == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("rational frequency is an exact resonance") {
  FrequencyVector w{{pi / 2.0}, 1.0, 10};
  try {
    (void)diophantine_margin(w);
    FAIL("expected a resonance");
  } catch (const ResonanceError& e) {
    REQUIRE(e.k.size() == 1);
    CHECK(e.k[0] % 2 == 0);
  }
}

TEST_CASE("frequency validation") {
  CHECK_THROWS_AS(validate({{}, 1.0, 10}), ConfigError);
  CHECK_THROWS_AS(validate({{7.0}, 1.0, 10}), ConfigError);
  CHECK_THROWS_AS(validate({{1.0, 2.0}, 1.0, 10}), ConfigError);
  CHECK_NOTHROW(validate({{1.0, 2.0}, 1.5, 10}));
}

TEST_CASE("distance to the pi lattice") {
  CHECK(static_cast<double>(dist_to_pi_lattice(3.0L * std::numbers::pi_v<long double>)) < 1e-15);
  CHECK(static_cast<double>(dist_to_pi_lattice(0.5L)) == doctest::Approx(0.5));
  CHECK(static_cast<double>(dist_to_pi_lattice(-3.0L)) == doctest::Approx(pi - 3.0));
}

TEST_CASE("index enumeration covers the box once") {
  int count = 0;
  for_each_index(2, 2, [&](const Index&) { ++count; });
  CHECK(count == 25);
}

TEST_CASE("KAM schedule") {
  KamSchedule s(1e-3, 8);
  CHECK(s.depth() == 8);
  for (std::size_t j = 1; j < 8; ++j) {
    CHECK(s.log_eps(j) == doctest::Approx((1.0 + KamSchedule::sigma) * s.log_eps(j - 1)));
    CHECK(s.eps(j) < s.eps(j - 1));
  }
  CHECK_THROWS_AS(KamSchedule(1.5), DomainError);
  CHECK(japanese_bracket(0.0) == 1.0);
  CHECK(japanese_bracket(3.0) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("KAM depth search agrees with the closed form") {
  KamSchedule s(1e-2, 4);
  for (double t : {2.0, 10.0, 1e3, 1e6}) {
    const int a = kam_depth(t, s);
    const int b = kam_depth_formula(t, 1e-2);
    CHECK(std::abs(a - b) <= 1);
  }
  CHECK_THROWS_AS(kam_depth(0.5, s), DomainError);
}
