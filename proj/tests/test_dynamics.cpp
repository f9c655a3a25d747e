#include "lkg/dynamics.hpp"
#include "lkg/error.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace lkg;
using namespace lkg::dynamics;
using Potential = potential::TrigPolynomialPotential;

namespace {

const std::vector<double> kOmega{std::numbers::pi * (std::sqrt(5.0) - 1.0)};

lattice::JacobiMatrix kg(const Potential& V, int N, double m = 1.0) {
  const std::vector<double> th{0.0};
  return lattice::build_operator(V, kOmega, th, lattice::LatticeWindow(N), lattice::OperatorTag::KleinGordon, m);
}

std::vector<double> delta0(int N, double amp = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(2 * N + 1), 0.0);
  x[static_cast<std::size_t>(N)] = amp;
  return x;
}

std::vector<double> linear_grid(double t0, double t1, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

} // namespace

TEST_CASE("admissible exponents") {
  CHECK(admissible_q(0.3, 6.0) == doctest::Approx(10.0));
  CHECK(std::isinf(admissible_q(0.3, 2.0)));
  CHECK(admissible_q(0.3, INFINITY) == doctest::Approx(2.0 / 0.3));
  CHECK(is_admissible(0.3, 10.0, 6.0));
  CHECK(is_admissible(0.3, INFINITY, 2.0));
  // 2/3 != 0.3 (1 - 2/3)
  CHECK_FALSE(is_admissible(0.3, 3.0, 3.0));
  CHECK_THROWS_AS(admissible_q(0.34, 6.0), DomainError);
  CHECK_THROWS_AS(admissible_q(0.3, 1.5), DomainError);
}

TEST_CASE("lp norms") {
  const std::vector<double> x{3.0, -4.0, 0.0};
  CHECK(lp_norm(x, 2.0) == doctest::Approx(5.0));
  CHECK(lp_norm(x, INFINITY) == 4.0);
  CHECK(lp_norm(x, 4.0) == doctest::Approx(std::pow(81.0 + 256.0, 0.25)));
}

TEST_CASE("light cone bookkeeping") {
  const lattice::LatticeWindow w(100);
  auto phi = delta0(100), psi = std::vector<double>(phi.size(), 0.0);
  psi[105] = 1.0;  // site 5
  const auto c = light_cone(w, phi, psi, 1.0, 100.0);
  CHECK(c.required == doctest::Approx(5.0 + 1.05 * 0.6180339887 * 100.0 + 10.0).epsilon(1e-8));
  CHECK(c.satisfied);
  CHECK_FALSE(light_cone(w, phi, psi, 1.0, 200.0).satisfied);
}

TEST_CASE("evolution refuses windows that violate the light cone") {
  const auto T = kg(Potential::zero(1), 30);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(30), psi = std::vector<double>(phi.size(), 0.0);
  const std::vector<double> times{0.0, 10.0, 60.0};
  CHECK_THROWS_AS(evolve_linear(T, cache, phi, psi, times), WindowError);
}

TEST_CASE("boundary sentinel") {
  std::vector<double> u(50, 0.0);
  u[25] = 1.0;
  CHECK_NOTHROW(check_boundary(u, 1.0));
  u[1] = 1e-6;
  CHECK_THROWS_AS(check_boundary(u, 1.0), ContaminationError);
}

TEST_CASE("lean and full trajectories carry the same norms") {
  const auto T = kg(Potential::cosine(1, 0.05), 80);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(80), psi = delta0(80, 0.5);
  const auto times = linear_grid(0.0, 60.0, 61);
  LinearOptions full, lean;
  lean.lean = true;
  const auto a = evolve_linear(T, cache, phi, psi, times, full);
  const auto b = evolve_linear(T, cache, phi, psi, times, lean);
  CHECK(a.linf == b.linf);
  CHECK(a.l2 == b.l2);
  CHECK_THROWS_AS(b.state(3), MissingStatesError);
  const auto s = a.state(30);
  const auto ref = calculus::kg_propagate(cache, phi, psi, times[30]);
  for (std::size_t i = 0; i < s.u.size(); ++i) CHECK(std::abs(s.u[i] - ref.u[i]) < 1e-12);
  for (double e : a.energy) CHECK(e == doctest::Approx(a.energy.front()).epsilon(1e-12));
  CHECK(a.data_l1 == doctest::Approx(1.5));
  CHECK(a.data_l2 == doctest::Approx(1.5));
}

TEST_CASE("decay fit recovers a planted exponent") {
  std::vector<double> t, f;
  for (int k = 0; k < 400; ++k) {
    const double x = 10.0 * std::pow(200.0, k / 399.0);
    t.push_back(x);
    f.push_back(2.0 * std::pow(x, -0.3) * (1.0 + 0.1 * std::cos(3.0 * x)));
  }
  const auto r = decay_fit_series(t, f, 2.0);
  CHECK(r.tau_hat == doctest::Approx(0.3).epsilon(0.02));
  CHECK(r.ci_low <= r.tau_hat);
  CHECK(r.ci_high >= r.tau_hat);
  CHECK(r.t_lo == doctest::Approx(t.back() / 20.0));
  CHECK(r.K1_empirical > 0.9);
  CHECK(r.K1_empirical < 1.3);
  CHECK_FALSE(r.caveat.empty());
  const std::vector<double> few_t{1.0, 2.0, 3.0}, few_f{1.0, 0.5, 0.3};
  CHECK_THROWS_AS(decay_fit_series(few_t, few_f), InsufficientDataError);
}

TEST_CASE("Strichartz norm equals a direct trapezoid sum") {
  const auto T = kg(Potential::zero(1), 60);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(60), psi = std::vector<double>(phi.size(), 0.0);
  const auto times = linear_grid(0.0, 40.0, 401);
  LinearOptions o;
  o.velocity = false;
  const auto tr = evolve_linear(T, cache, phi, psi, times, o);
  double s = 0.0;
  for (std::size_t k = 1; k < times.size(); ++k) {
    const auto a = calculus::kg_propagate(cache, phi, psi, times[k - 1]).u;
    const auto b = calculus::kg_propagate(cache, phi, psi, times[k]).u;
    s += 0.5 * (times[k] - times[k - 1]) * (std::pow(lp_norm(a, 6.0), 10.0) + std::pow(lp_norm(b, 6.0), 10.0));
  }
  CHECK(strichartz_norm(tr, 10.0, 6.0) == doctest::Approx(std::pow(s, 0.1)).epsilon(1e-10));
  CHECK(strichartz_norm(tr, INFINITY, 2.0) == doctest::Approx(*std::max_element(tr.l2.begin(), tr.l2.end())));

  const std::vector<std::pair<double, double>> pairs{{10.0, 6.0}, {INFINITY, 2.0}};
  const std::vector<double> Ts{20.0, 40.0};
  const auto rep = strichartz_report(tr, 0.3, pairs, Ts);
  CHECK(rep.pairs.size() == 2);
  CHECK(rep.pairs[1].ratio[1] <= 1.0 + 1e-9);
  CHECK(rep.pairs[0].norm[0] <= rep.pairs[0].norm[1]);
  const std::vector<std::pair<double, double>> bad{{3.0, 3.0}};
  CHECK_THROWS_AS(strichartz_report(tr, 0.3, bad, Ts), DomainError);
}

TEST_CASE("energy functional") {
  const auto T = kg(Potential::zero(1), 2);
  WaveState s{0.0, {0.0, 0.5, 1.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0, 0.0}};
  // 1/2 |v|^2 + 1/2 <u,Tu> with T = 3 on the diagonal and -1 off it
  const double lin = 0.5 * 1.0 + 0.5 * (3.0 * 0.25 + 3.0 * 1.0 - 2.0 * 0.5);
  CHECK(calculus::linear_energy(T, s.u, s.v) == doctest::Approx(lin));
  const double nl = std::pow(0.5, 10.0) + 1.0;
  CHECK(energy(s, T, 9.0, -1) == doctest::Approx(lin + nl / 10.0));
  CHECK(energy(s, T, 9.0, 1) == doctest::Approx(lin - nl / 10.0));
}

TEST_CASE("tiny data follow the linear flow") {
  const int N = 60;
  const auto T = kg(Potential::cosine(1, 0.05), N);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(N, 1e-3), psi = delta0(N, 1e-3);
  NonlinearOptions o;
  o.record_every = 100;
  const auto run = evolve_nonlinear(T, cache, phi, psi, 9.0, -1, 0.01, 20.0, o);
  const auto ref = calculus::kg_propagate(cache, phi, psi, 20.0);
  const auto last = run.traj.state(run.traj.size() - 1);
  CHECK(last.t == doctest::Approx(20.0));
  for (std::size_t i = 0; i < ref.u.size(); ++i) CHECK(std::abs(last.u[i] - ref.u[i]) < 1e-12);
}

TEST_CASE("Strang splitting energy error is second order") {
  const int N = 40;
  const auto T = kg(Potential::zero(1), N);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(N, 0.6), psi = delta0(N, 0.6);
  const auto a = evolve_nonlinear(T, cache, phi, psi, 9.0, -1, 4e-3, 5.0);
  const auto b = evolve_nonlinear(T, cache, phi, psi, 9.0, -1, 2e-3, 5.0);
  const double ratio = a.max_rel_drift / b.max_rel_drift;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  // modal energy equals the physical one at recorded states
  const auto s = a.traj.state(a.traj.size() - 1);
  CHECK(energy(s, T, 9.0, -1) == doctest::Approx(a.traj.energy.back()).epsilon(1e-10));
}

TEST_CASE("nonlinear argument checks and blow-up reporting") {
  const int N = 40;
  const auto T = kg(Potential::zero(1), N);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(N, 3.0), psi = delta0(N, 0.0);
  CHECK_THROWS_AS(evolve_nonlinear(T, cache, phi, psi, 9.0, -1, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(evolve_nonlinear(T, cache, phi, psi, 1.0, -1, 0.01, 1.0), DomainError);
  CHECK_THROWS_AS(evolve_nonlinear(T, cache, phi, psi, 9.0, 0, 0.01, 1.0), DomainError);
  const auto run = evolve_nonlinear(T, cache, phi, psi, 9.0, 1, 0.01, 10.0);
  CHECK(run.blow_up);
  CHECK(run.blow_up_time > 0.0);
}

TEST_CASE("small-data report and K1 spread") {
  const int N = 80;
  const auto T = kg(Potential::zero(1), N);
  const auto cache = calculus::PropagatorCache::build(T);
  const auto phi = delta0(N, 0.05), psi = delta0(N, 0.05);
  NonlinearOptions o;
  o.record_every = 10;
  const auto run = evolve_nonlinear(T, cache, phi, psi, 9.0, -1, 0.02, 60.0, o);
  const std::vector<double> rl{4.0, INFINITY};
  const auto rep = small_data_report(run.traj, rl);
  CHECK(rep.l2_initial == doctest::Approx(0.1));
  for (const auto& r : rep.rows) {
    CHECK(r.ratio <= 1.0);
    CHECK(r.global_max >= r.late_max);
  }
  const std::vector<double> bad{2.0};
  CHECK_THROWS_AS(small_data_report(run.traj, bad), DomainError);
  const std::vector<double> k1{1.0, 1.2, 0.8};
  CHECK(k1_spread(k1) == doctest::Approx(0.5));
}
