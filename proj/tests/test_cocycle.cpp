#include "lkg/cocycle.hpp"
#include "lkg/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lkg;
using namespace lkg::cocycle;
using Potential = potential::TrigPolynomialPotential;
using std::numbers::pi;

namespace {
const std::vector<double> kOmega{pi * (std::sqrt(5.0) - 1.0)};
const std::vector<double> kTheta{0.0};
} // namespace

TEST_CASE("transfer matrix is unimodular with the Schrodinger layout") {
  const auto V = Potential::cosine(1, 0.3);
  const std::vector<double> th{0.8};
  const auto A = transfer(0.4, V, th);
  CHECK(A.a == doctest::Approx(0.6 * std::cos(0.8) - 0.4));
  CHECK(A.b == -1.0);
  CHECK(A.c == 1.0);
  CHECK(A.d == 0.0);
  CHECK(A.det() == doctest::Approx(1.0));
  const auto P = renormalize(TransferMatrix{2.0, 0.0, 0.0, 2.0});
  CHECK(P.det() == doctest::Approx(1.0));
}

TEST_CASE("lift increment agrees with the angle difference modulo 2 pi") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0), ang(0.0, 2.0 * pi);
  for (int i = 0; i < 500; ++i) {
    const TransferMatrix A{u(rng), -1.0, 1.0, 0.0};
    const double a = ang(rng);
    const double y0 = std::cos(a), y1 = std::sin(a);
    const double inc = lift_increment(A, y0, y1);
    CHECK(inc >= -pi / 2 - 1e-12);
    CHECK(inc < 3 * pi / 2 + 1e-12);
    const double z0 = A.a * y0 + A.b * y1, z1 = A.c * y0 + A.d * y1;
    double diff = std::atan2(z1, z0) - a;
    diff -= 2.0 * pi * std::round((diff - inc) / (2.0 * pi));
    CHECK(std::abs(diff - inc) < 1e-12);
  }
}

TEST_CASE("free rotation number is arccos(-E/2)") {
  const auto V = Potential::zero(1);
  for (double E : {-1.9, -1.0, -0.3, 0.0, 0.7, 1.5, 1.95}) {
    const auto r = rotation_number(E, V, kOmega, kTheta, 100'000);
    CHECK(std::abs(r.rho - std::acos(-E / 2.0)) < 1e-4);
    CHECK(r.error < 1e-4);
  }
  CHECK(rotation_number(-3.0, V, kOmega, kTheta, 10'000).rho == doctest::Approx(0.0).epsilon(1e-3));
  CHECK(rotation_number(3.0, V, kOmega, kTheta, 10'000).rho == doctest::Approx(pi).epsilon(1e-3));
  CHECK_THROWS_AS(rotation_number(0.0, V, kOmega, kTheta, 10), DomainError);
}

TEST_CASE("rotation number is non-decreasing in E") {
  const auto V = Potential::cosine(1, 0.3);
  double prev = -1.0;
  for (double E = -2.7; E <= 2.7; E += 0.1) {
    const double rho = rotation_number(E, V, kOmega, kTheta, 20'000).rho;
    CHECK(rho >= prev - 2e-3);
    prev = rho;
  }
}

TEST_CASE("Lyapunov exponent") {
  const auto V0 = Potential::zero(1);
  // outside the band the growth rate is arccosh(|E|/2)
  CHECK(lyapunov(3.0, V0, kOmega, kTheta, 100'000) == doctest::Approx(std::acosh(1.5)).epsilon(1e-4));
  CHECK(lyapunov(-2.5, V0, kOmega, kTheta, 100'000) == doctest::Approx(std::acosh(1.25)).epsilon(1e-4));
  CHECK(lyapunov(0.5, V0, kOmega, kTheta, 100'000) < 1e-3);
  const auto V = Potential::cosine(1, 0.05);
  CHECK(lyapunov(0.3, V, kOmega, kTheta, 200'000) < 5e-3);
  CHECK(lyapunov(3.0, V, kOmega, kTheta) > lyapunov(2.5, V, kOmega, kTheta));
}

TEST_CASE("gap label matches brute-force enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, pi);
  for (int i = 0; i < 200; ++i) {
    const double rho = u(rng);
    const auto lab = gap_label(rho, kOmega, 3);
    const auto [k, res] = oracle::brute_gap_label(rho, kOmega[0], 3);
    CHECK(lab.residual == doctest::Approx(res).epsilon(1e-12));
    if (lab.candidates.size() == 1) CHECK(lab.k[0] == k);
  }
  const auto exact = gap_label(std::fmod(2.0 * kOmega[0] / 2.0, pi), kOmega, 3);
  CHECK(exact.k[0] == 2);
  CHECK(exact.residual < 1e-12);
  CHECK(exact.labeled);
}

TEST_CASE("free gap scan has no gaps inside the band") {
  std::vector<double> E;
  for (double x = -2.5; x <= 2.5; x += 0.05) E.push_back(x);
  GapScanOptions o;
  o.n_iter = 20'000;
  const auto s = gap_scan(Potential::zero(1), kOmega, {{0.0}}, lattice::LatticeWindow(100), E, o);
  CHECK(s.rows.size() == E.size());
  for (const auto& g : s.gaps) CHECK((g.E_hi <= -2.0 || g.E_lo >= 2.0));
}

TEST_CASE("gap scan finds the first-order gap of the cosine potential") {
  std::vector<double> E;
  for (double x = -1.2; x <= -0.3; x += 0.01) E.push_back(x);
  GapScanOptions o;
  o.n_iter = 50'000;
  const auto s = gap_scan(Potential::cosine(1, 0.3), kOmega, {{0.0}}, lattice::LatticeWindow(300), E, o);
  bool found = false;
  for (const auto& g : s.gaps)
    if (std::abs(g.label.k[0]) == 1 && g.label.residual < 1e-3) found = true;
  CHECK(found);
}

TEST_CASE("rotation number tracks the integrated density of states") {
  const auto V = Potential::cosine(1, 0.05);
  const auto H = lattice::build_operator(V, kOmega, kTheta, lattice::LatticeWindow(200),
                                         lattice::OperatorTag::Schrodinger);
  const double M = static_cast<double>(H.size());
  for (double E : {-1.2, -0.4, 0.5, 1.3}) {
    const double rho = rotation_number(E, V, kOmega, kTheta, 200'000).rho;
    CHECK(std::abs(rho / pi - static_cast<double>(lattice::eigen_count_below(H, E)) / M) <= 5.0 / M);
  }
}

TEST_CASE("custom step functor reproduces run_cocycle") {
  const auto V = Potential::cosine(1, 0.2);
  const double E = 0.3;
  const auto a = run_cocycle(E, V, kOmega, kTheta, 5000);
  const auto b = iterate_cocycle(5000, [&](std::size_t n) {
    const double t = kTheta[0] + static_cast<double>(n) * kOmega[0];
    return transfer(E, V, std::span<const double>(&t, 1));
  });
  CHECK(a.lift_total == doctest::Approx(b.lift_total).epsilon(1e-12));
}
