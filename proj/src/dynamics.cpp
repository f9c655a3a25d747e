#include "lkg/dynamics.hpp"
#include "lkg/error.hpp"
#include "lkg/format.hpp"
#include "lkg/kernels.hpp"
#include "lkg/oscillatory.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace lkg::dynamics {

namespace {

void record_norms(Trajectory& tr, std::span<const double> u) {
  tr.linf.push_back(lp_norm(u, INFINITY));
  tr.l2.push_back(lp_norm(u, 2.0));
  tr.l4.push_back(lp_norm(u, 4.0));
  tr.l6.push_back(lp_norm(u, 6.0));
}

double l1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

void check_times(std::span<const double> times) {
  if (times.empty()) throw DomainError("empty time grid");
  if (times.front() < 0.0) throw DomainError("time grid must start at t >= 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw DomainError("time grid must be strictly increasing");
}

} // namespace

LightCone light_cone(const lattice::LatticeWindow& window, std::span<const double> phi,
                     std::span<const double> psi, double mass, double t_max) {
  int support = 0;
  for (std::size_t i = 0; i < window.size(); ++i)
    if (phi[i] != 0.0 || psi[i] != 0.0) support = std::max(support, std::abs(window.site(i)));
  const double v_max = oscillatory::critical_velocity(mass).v_max;
  LightCone c;
  c.half_width = window.half_width();
  c.required = support + 1.05 * v_max * t_max + 10.0;
  c.satisfied = static_cast<double>(c.half_width) >= c.required;
  return c;
}

WaveState Trajectory::state(std::size_t k) const {
  if (lean || U.empty()) throw MissingStatesError("trajectory was recorded in storage-lean mode");
  WaveState s;
  s.t = times.at(k);
  auto u = U.col(k);
  s.u.assign(u.begin(), u.end());
  if (!V.empty()) {
    auto v = V.col(k);
    s.v.assign(v.begin(), v.end());
  }
  return s;
}

double admissible_q(double tau, double r) {
  if (!(tau > 0.0 && tau < 1.0 / 3.0)) throw DomainError("tau must lie in (0, 1/3)");
  if (!(r >= 2.0)) throw DomainError("r must be >= 2");
  if (r == 2.0) return INFINITY;
  const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
  return 2.0 / (tau * (1.0 - 2.0 * inv_r));
}

bool is_admissible(double tau, double q, double r, double tol) {
  if (!(q >= 2.0) || !(r >= 2.0)) return false;
  const double lhs = std::isinf(q) ? 0.0 : 2.0 / q;
  const double rhs = tau * (1.0 - (std::isinf(r) ? 0.0 : 2.0 / r));
  return std::abs(lhs - rhs) <= tol;
}

double lp_norm(std::span<const double> u, double r) {
  if (std::isinf(r)) {
    double m = 0.0;
    for (double x : u) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  if (r == 2.0) {
    for (double x : u) s += x * x;
    return std::sqrt(s);
  }
  for (double x : u) s += std::pow(std::abs(x), r);
  return std::pow(s, 1.0 / r);
}

void check_boundary(std::span<const double> u, double t, SentinelOptions opts) {
  const std::size_t M = u.size();
  const auto w = static_cast<std::size_t>(opts.sites);
  if (M <= 2 * w) return;
  double umax = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double a = std::abs(u[i]);
    umax = std::max(umax, a);
    if (i < w || i >= M - w) edge = std::max(edge, a);
  }
  if (edge > opts.rel * umax)
    throw ContaminationError("boundary sentinel tripped at t = " + num(t) +
                             ": edge amplitude " + num(edge / umax) +
                             " of the maximum");
}

Trajectory evolve_linear(const lattice::JacobiMatrix& T, const calculus::PropagatorCache& cache,
                         std::span<const double> phi, std::span<const double> psi,
                         std::span<const double> times, LinearOptions opts, Exec exec) {
  const std::size_t M = T.size();
  if (cache.size() != M || phi.size() != M || psi.size() != M)
    throw DimensionError("evolve_linear: data, operator and cache sizes differ");
  if (T.tag != lattice::OperatorTag::KleinGordon)
    throw DomainError("evolve_linear needs the Klein-Gordon operator T");
  check_times(times);
  const lattice::LatticeWindow window(static_cast<int>((M - 1) / 2));
  Trajectory tr;
  tr.cone = light_cone(window, phi, psi, T.mass, times.back());
  if (!tr.cone.satisfied)
    throw WindowError("light cone needs half-width >= " + num(tr.cone.required) +
                      ", have " + std::to_string(tr.cone.half_width));
  tr.lean = opts.lean;
  tr.times.assign(times.begin(), times.end());
  tr.data_l1 = l1(phi) + l1(psi);
  tr.data_l2 = lp_norm(phi, 2.0) + lp_norm(psi, 2.0);
  const std::size_t K = times.size();
  if (!opts.lean) {
    tr.U = DenseMatrix(M, K);
    if (opts.velocity) tr.V = DenseMatrix(M, K);
  }

  const auto data = calculus::to_modal(cache, phi, psi, exec);
  const auto w = cache.omega();
  double modal_energy = 0.0;
  for (std::size_t j = 0; j < M; ++j)
    modal_energy += 0.5 * (data.b[j] * data.b[j] + w[j] * w[j] * data.a[j] * data.a[j]);

  DenseMatrix Uc, Vc;
  for (std::size_t k0 = 0; k0 < K; k0 += opts.time_chunk) {
    const std::size_t k1 = std::min(K, k0 + opts.time_chunk);
    const auto chunk = times.subspan(k0, k1 - k0);
    calculus::kg_propagate_grid(cache, data, chunk, Uc, opts.velocity ? &Vc : nullptr, exec);
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      auto u = Uc.col(k);
      check_boundary(u, chunk[k], opts.sentinel);
      record_norms(tr, u);
      tr.energy.push_back(opts.velocity ? calculus::linear_energy(T, u, Vc.col(k)) : modal_energy);
      if (!opts.lean) {
        std::copy(u.begin(), u.end(), tr.U.col(k0 + k).begin());
        if (opts.velocity) {
          auto v = Vc.col(k);
          std::copy(v.begin(), v.end(), tr.V.col(k0 + k).begin());
        }
      }
    }
  }
  return tr;
}

DecayReport decay_fit_series(std::span<const double> times, std::span<const double> f,
                             double data_l1) {
  if (times.size() != f.size()) throw DimensionError("decay fit: times and values differ in length");
  check_times(times);
  const std::size_t K = times.size();
  const double t_hi = times.back(), t_lo = t_hi / 20.0;

  std::vector<double> x, y;
  for (std::size_t k = 0; k < K; ++k) {
    if (times[k] < t_lo) continue;
    double env = 0.0;
    for (std::size_t j = k >= 4 ? k - 4 : 0; j <= k; ++j) env = std::max(env, f[j]);
    if (!(env > 0.0)) continue;
    x.push_back(std::log(times[k]));
    y.push_back(std::log(env));
  }
  if (x.size() < 8)
    throw InsufficientDataError("decay fit: only " + std::to_string(x.size()) +
                                " envelope points in [t_K/20, t_K] (need 8)");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    sse += r * r;
  }
  const double se = std::sqrt(sse / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double tq = boost::math::quantile(boost::math::complement(dist, 0.025));

  DecayReport rep;
  rep.tau_hat = -slope;
  rep.ci_low = rep.tau_hat - tq * se;
  rep.ci_high = rep.tau_hat + tq * se;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  rep.peak_count = x.size();
  rep.K1_empirical = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double bracket = std::sqrt(1.0 + times[k] * times[k]);
    rep.K1_empirical = std::max(rep.K1_empirical, std::pow(bracket, rep.tau_hat) * f[k] / data_l1);
  }
  rep.caveat = "finite-T fit: tau_hat absorbs the slowly varying log factor of the bound "
               "together with the power";
  return rep;
}

DecayReport decay_fit(const Trajectory& traj) {
  if (traj.times.back() < 100.0) throw DomainError("decay fit needs t_K >= 100");
  if (traj.size() < 200) throw DomainError("decay fit needs at least 200 recorded times");
  return decay_fit_series(traj.times, traj.linf, traj.data_l1);
}

double strichartz_norm(const Trajectory& traj, double q, double r) {
  if (traj.lean || traj.U.empty())
    throw MissingStatesError("Strichartz norms need a full-state trajectory");
  const std::size_t K = traj.size();
  std::vector<double> nr(K);
  for (std::size_t k = 0; k < K; ++k) nr[k] = lp_norm(traj.U.col(k), r);
  if (std::isinf(q)) return *std::max_element(nr.begin(), nr.end());
  double s = 0.0;
  for (std::size_t k = 1; k < K; ++k)
    s += 0.5 * (traj.times[k] - traj.times[k - 1]) * (std::pow(nr[k], q) + std::pow(nr[k - 1], q));
  return std::pow(s, 1.0 / q);
}

namespace {

Trajectory prefix(const Trajectory& tr, double T_end) {
  std::size_t K = 0;
  while (K < tr.size() && tr.times[K] <= T_end * (1.0 + 1e-12)) ++K;
  if (K < 2) throw InsufficientDataError("fewer than two recorded times in [0, T]");
  Trajectory out;
  out.times.assign(tr.times.begin(), tr.times.begin() + static_cast<std::ptrdiff_t>(K));
  out.U = DenseMatrix(tr.U.rows(), K);
  std::copy(tr.U.data().begin(),
            tr.U.data().begin() + static_cast<std::ptrdiff_t>(K * tr.U.rows()),
            out.U.data().begin());
  out.data_l2 = tr.data_l2;
  return out;
}

} // namespace

StrichartzReport strichartz_report(const Trajectory& traj, double tau,
                                   std::span<const std::pair<double, double>> pairs,
                                   std::span<const double> T_values) {
  if (T_values.empty()) throw DomainError("Strichartz report needs at least one T");
  if (traj.lean || traj.U.empty())
    throw MissingStatesError("Strichartz norms need a full-state trajectory");
  StrichartzReport rep;
  rep.tau = tau;
  rep.T_values.assign(T_values.begin(), T_values.end());
  for (auto [q, r] : pairs)
    if (!is_admissible(tau, q, r))
      throw DomainError("(q, r) = (" + num(q) + ", " + num(r) +
                        ") is not tau-admissible");
  std::vector<Trajectory> prefixes;
  for (double T : T_values) prefixes.push_back(prefix(traj, T));
  rep.saturation_delta = 0.0;
  for (auto [q, r] : pairs) {
    StrichartzPair sp{q, r, {}, {}};
    for (const auto& pre : prefixes) {
      const double n = strichartz_norm(pre, q, r);
      sp.norm.push_back(n);
      sp.ratio.push_back(n / traj.data_l2);
    }
    rep.saturation_delta =
        std::max(rep.saturation_delta, std::abs(sp.ratio.back() / sp.ratio.front() - 1.0));
    rep.pairs.push_back(std::move(sp));
  }
  return rep;
}

double energy(const WaveState& s, const lattice::JacobiMatrix& T, double p, int sign) {
  double e = calculus::linear_energy(T, s.u, s.v);
  double nl = 0.0;
  for (double x : s.u) nl += std::pow(std::abs(x), p + 1.0);
  return e - static_cast<double>(sign) / (p + 1.0) * nl;
}

NonlinearRun evolve_nonlinear(const lattice::JacobiMatrix& T,
                              const calculus::PropagatorCache& cache,
                              std::span<const double> phi, std::span<const double> psi, double p,
                              int sign, double dt, double T_end, NonlinearOptions opts,
                              Exec exec) {
  const std::size_t M = T.size();
  if (cache.size() != M || phi.size() != M || psi.size() != M)
    throw DimensionError("evolve_nonlinear: data, operator and cache sizes differ");
  if (!(p > 1.0)) throw DomainError("nonlinearity exponent p must exceed 1");
  if (sign != 1 && sign != -1) throw DomainError("sign must be +1 (focusing) or -1 (defocusing)");
  const auto w = cache.omega();
  const double dt_max = 0.1 / w.back();
  if (!(dt > 0.0) || dt > dt_max * (1.0 + 1e-12))
    throw DomainError("dt must lie in (0, 0.1/sqrt(mu_M)] = (0, " + num(dt_max) + "]");
  if (!(T_end > 0.0)) throw DomainError("T_end must be positive");
  if (opts.record_every == 0) throw DomainError("record_every must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(T_end / dt));

  NonlinearRun run;
  auto& tr = run.traj;
  const lattice::LatticeWindow window(static_cast<int>((M - 1) / 2));
  tr.cone = light_cone(window, phi, psi, T.mass, T_end);
  if (!tr.cone.satisfied)
    throw WindowError("light cone needs half-width >= " + num(tr.cone.required) +
                      ", have " + std::to_string(tr.cone.half_width));
  tr.data_l1 = l1(phi) + l1(psi);
  tr.data_l2 = lp_norm(phi, 2.0) + lp_norm(psi, 2.0);
  const std::size_t n_rec = steps / opts.record_every + (steps % opts.record_every ? 2 : 1);
  tr.U = DenseMatrix(M, n_rec);
  tr.V = DenseMatrix(M, n_rec);

  auto s = calculus::to_modal(cache, phi, psi, exec);
  std::vector<double> u = cache.from_modal(s.a, exec), f(M), g(M), v(M);
  const double half = 0.5 * dt * static_cast<double>(sign);

  auto force = [&] {
    for (std::size_t i = 0; i < M; ++i) f[i] = std::pow(std::abs(u[i]), p - 1.0) * u[i];
    kernels::gemv_t(cache.Q(), f, g, exec);
  };
  auto modal_energy = [&] {
    double e = 0.0, nl = 0.0;
    for (std::size_t j = 0; j < M; ++j) e += 0.5 * (s.b[j] * s.b[j] + w[j] * w[j] * s.a[j] * s.a[j]);
    for (std::size_t i = 0; i < M; ++i) nl += std::pow(std::abs(u[i]), p + 1.0);
    return e - static_cast<double>(sign) / (p + 1.0) * nl;
  };
  std::size_t rec = 0;
  auto record = [&](double t) {
    kernels::gemv(cache.Q(), s.b, v, exec);
    check_boundary(u, t, opts.sentinel);
    std::copy(u.begin(), u.end(), tr.U.col(rec).begin());
    std::copy(v.begin(), v.end(), tr.V.col(rec).begin());
    tr.times.push_back(t);
    record_norms(tr, u);
    tr.energy.push_back(run.step_energy.back());
    ++rec;
  };

  force();
  run.step_energy.push_back(modal_energy());
  const double e0 = run.step_energy.front();
  record(0.0);
  for (std::size_t n = 1; n <= steps; ++n) {
    for (std::size_t j = 0; j < M; ++j) s.b[j] += half * g[j];
    calculus::rotate_modal(w, dt, s);
    kernels::gemv(cache.Q(), s.a, u, exec);
    double umax = 0.0;
    for (double x : u) umax = std::max(umax, std::abs(x));
    const double t = static_cast<double>(n) * dt;
    if (!(umax <= opts.blowup_threshold)) {
      run.blow_up = true;
      run.blow_up_time = t;
      break;
    }
    force();
    for (std::size_t j = 0; j < M; ++j) s.b[j] += half * g[j];
    run.step_energy.push_back(modal_energy());
    run.max_rel_drift = std::max(run.max_rel_drift,
                                 std::abs(run.step_energy.back() - e0) / std::max(std::abs(e0), 1e-300));
    run.steps = n;
    if (n % opts.record_every == 0 || n == steps) record(t);
  }
  // Trim unused columns (early stop or exact multiple).
  if (rec < n_rec) {
    DenseMatrix U2(M, rec), V2(M, rec);
    std::copy_n(tr.U.data().begin(), M * rec, U2.data().begin());
    std::copy_n(tr.V.data().begin(), M * rec, V2.data().begin());
    tr.U = std::move(U2);
    tr.V = std::move(V2);
  }
  return run;
}

SmallDataReport small_data_report(const Trajectory& traj, std::span<const double> r_list) {
  if (traj.lean || traj.U.empty())
    throw MissingStatesError("small-data report needs a full-state trajectory");
  const std::size_t K = traj.size();
  const double T = traj.times.back();
  SmallDataReport rep;
  for (double r : r_list) {
    if (!(r > 2.0)) throw DomainError("small-data report needs r > 2");
    SmallDataRow row{r, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < K; ++k) {
      const double n = lp_norm(traj.U.col(k), r);
      row.global_max = std::max(row.global_max, n);
      if (traj.times[k] >= 0.5 * T) row.late_max = std::max(row.late_max, n);
    }
    row.ratio = row.global_max > 0.0 ? row.late_max / row.global_max : 0.0;
    rep.rows.push_back(row);
  }
  rep.l2_sup = 0.0;
  for (std::size_t k = 0; k < K; ++k) rep.l2_sup = std::max(rep.l2_sup, lp_norm(traj.U.col(k), 2.0));
  rep.l2_initial = traj.data_l2;
  rep.l2_ratio = rep.l2_initial > 0.0 ? rep.l2_sup / rep.l2_initial : 0.0;
  return rep;
}

double k1_spread(std::span<const double> k1) {
  if (k1.empty()) throw InsufficientDataError("no K1 values");
  const auto [lo, hi] = std::minmax_element(k1.begin(), k1.end());
  return *hi / *lo - 1.0;
}

} // namespace lkg::dynamics
