#include "lkg/error.hpp"
#include "lkg/lattice.hpp"
#include "lkg/oscillatory.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lkg;
using namespace lkg::oscillatory;
using std::numbers::pi;

TEST_CASE("dispersion derivatives match finite differences") {
  for (double m : {0.5, 1.0, 2.0})
    for (double rho : {0.2, 1.0, 1.9, 2.8}) {
      for (int k = 1; k <= 3; ++k) {
        const auto fd = oracle::central_diff([&](double x) { return dispersion(m, x, k - 1); }, rho, 1e-5);
        CHECK(dispersion(m, rho, k) == doctest::Approx(fd).epsilon(1e-7));
      }
    }
  CHECK(dispersion(1.0, 0.0, 0) == doctest::Approx(1.0));
  CHECK(dispersion(1.0, pi, 0) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(dispersion(1.0, 0.3, 4), DomainError);
  CHECK_THROWS_AS(dispersion(0.0, 0.3, 0), DomainError);
}

TEST_CASE("third-derivative ratio is |W'''| / |sin rho|") {
  for (double rho : {0.3, 1.2, 2.5}) {
    const double w3 = dispersion(1.0, rho, 3);
    CHECK(third_derivative_ratio(1.0, rho) == doctest::Approx(std::abs(w3) / std::sin(rho)).epsilon(1e-12));
  }
}

TEST_CASE("critical point solves cos^2 - a cos + 1 = 0") {
  for (double m : {0.5, 1.0, 2.0}) {
    const double a = 2.0 + m * m;
    const double c = (a - std::sqrt(a * a - 4.0)) / 2.0;
    const auto cv = critical_velocity(m);
    CHECK(cv.rho_star == doctest::Approx(std::acos(c)).epsilon(1e-12));
    CHECK(std::abs(dispersion(m, cv.rho_star, 2)) < 1e-12);
    double vmax = 0.0;
    for (int i = 0; i <= 200000; ++i) vmax = std::max(vmax, dispersion(m, pi * i / 200000.0, 1));
    CHECK(cv.v_max == doctest::Approx(vmax).epsilon(1e-9));
    CHECK(cv.v_max < 1.0);
  }
  const auto cv = critical_velocity(1.0);
  CHECK(cv.v_max == doctest::Approx(0.618034).epsilon(1e-6));
  CHECK(cv.rho_star == doctest::Approx(1.178874).epsilon(1e-6));
}

TEST_CASE("dispersion profile constants for m = 1") {
  const DispersionProfile p(1.0);
  // endpoints: |a^2 - a + 1 - 3| / W(0)^5 = 4 and |a^2 + a + 1 - 3| / W(pi)^5 = 10 / 5^(5/2)
  CHECK(p.C2 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(p.C1 == doctest::Approx(10.0 / std::pow(5.0, 2.5)).epsilon(1e-9));
  CHECK(p.C1 > 0.0);
}

TEST_CASE("free kernel at t = 0") {
  CHECK(free_kernel(0, 0.0, 1.0, Kernel::Cos).value == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(free_kernel(3, 0.0, 1.0, Kernel::Cos).value) < 1e-13);
  CHECK(std::abs(free_kernel(0, 0.0, 1.0, Kernel::Sinc).value) < 1e-13);
}

TEST_CASE("free kernel matches the dense propagator oracle") {
  const int N = 100;
  const std::vector<double> om{1.0}, th{0.0};
  const auto T = lattice::build_operator(potential::TrigPolynomialPotential::zero(1), om, th,
                                         lattice::LatticeWindow(N), lattice::OperatorTag::KleinGordon, 1.0);
  const auto ref = oracle::jacobi_eigen(oracle::dense(T));
  for (double t : {3.0, 20.0, 45.0}) {
    const auto C = oracle::matrix_function(ref, [&](double mu) { return std::cos(t * std::sqrt(mu)); });
    const auto S = oracle::matrix_function(ref, [&](double mu) { return std::sin(t * std::sqrt(mu)) / std::sqrt(mu); });
    for (int n : {0, 1, 7, 20, -13}) {
      const auto i = static_cast<std::size_t>(N + n);
      CHECK(std::abs(free_kernel(n, t, 1.0, Kernel::Cos).value - C[i][N]) < 1e-9);
      CHECK(std::abs(free_kernel(n, t, 1.0, Kernel::Sinc).value - S[i][N]) < 1e-9);
    }
  }
}

TEST_CASE("kernel row agrees with pointwise evaluation and across executors") {
  const auto row = free_kernel_row(40, 25.0, 1.0, Kernel::Cos, {}, Exec::serial());
  const auto row2 = free_kernel_row(40, 25.0, 1.0, Kernel::Cos, {}, Exec{true, true});
  CHECK(row.values == row2.values);
  for (int n : {0, 5, 17, 40})
    CHECK(std::abs(row.values[static_cast<std::size_t>(n)] - free_kernel(n, 25.0, 1.0, Kernel::Cos).value) < 1e-9);
  CHECK(row.error <= 1e-9);
}

TEST_CASE("precision failure is reported") {
  KernelOptions o;
  o.abs_tol = 1e-30;
  o.max_refinements = 0;
  CHECK_THROWS_AS(free_kernel(3, 50.0, 1.0, Kernel::Cos, o), PrecisionError);
}

TEST_CASE("van der Corput probe") {
  const auto grid = geometric_grid(20.0, 200.0, 8);
  CHECK(grid.front() == 20.0);
  CHECK(grid.back() == 200.0);
  CHECK(grid[1] / grid[0] == doctest::Approx(grid[7] / grid[6]));
  const auto p = vdc_decay_probe(1.0, grid);
  for (const auto& r : p.rows) {
    CHECK(r.scaled == doctest::Approx(std::cbrt(r.t) * r.sup_abs_K).epsilon(1e-12));
    CHECK(r.outside_cone < 0.25 * r.sup_abs_K);
    CHECK(r.n_argmax <= std::ceil(1.05 * 0.618034 * r.t));
  }
  CHECK(p.ratio < 2.0);
  // the Airy tail beyond the cone shrinks relative to the peak as t grows
  CHECK(p.rows.back().outside_cone / p.rows.back().sup_abs_K <
        0.05 * p.rows.front().outside_cone / p.rows.front().sup_abs_K);
  const auto h = rescale(p, 0.5);
  for (std::size_t i = 0; i < p.rows.size(); ++i)
    CHECK(h.rows[i].scaled == doctest::Approx(std::pow(p.rows[i].t, 0.5 - 1.0 / 3.0) * p.rows[i].scaled));
  CHECK(h.growth > p.growth);
  const std::vector<double> short_grid{1.0, 2.0};
  CHECK_THROWS_AS(vdc_decay_probe(1.0, short_grid), DomainError);
}
