#include "lkg/run.hpp"
#include "lkg/calculus.hpp"
#include "lkg/cocycle.hpp"
#include "lkg/dynamics.hpp"
#include "lkg/format.hpp"
#include "lkg/lattice.hpp"
#include "lkg/oscillatory.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace lkg::run {

using config::ExperimentConfig;
using config::Kind;
using nlohmann::ordered_json;
using report::Check;
using report::Csv;
using report::OutputDir;

RunError::RunError(const Error& inner, Kind run_kind_, std::string config_hash_)
    : Error(inner.kind(), std::string(config::to_string(run_kind_)) + " run (config " +
                              config_hash_.substr(0, 12) + "): " + inner.what()),
      run_kind(run_kind_), config_hash(std::move(config_hash_)) {}

namespace {

using std::numbers::pi;

struct Context {
  const ExperimentConfig& cfg;
  OutputDir& out;
  std::vector<Check>& checks;
  Exec exec;

  bool csv() const { return cfg.output.has("csv"); }
  bool json() const { return cfg.output.has("json"); }
  bool bin() const { return cfg.output.has("bin"); }

  void check(std::string name, std::string required, double measured, bool pass) {
    checks.push_back({std::move(name), std::move(required), measured, pass});
  }
  void write_json(const std::string& name, const ordered_json& j) {
    if (json()) out.write(name, j.dump(2) + "\n");
  }
};

ordered_json jnum(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::string suffix(std::size_t i, std::size_t n) { return n > 1 ? "_theta" + std::to_string(i) : ""; }

lattice::JacobiMatrix build(const ExperimentConfig& c, const potential::TrigPolynomialPotential& V,
                            const std::vector<double>& theta, lattice::OperatorTag tag) {
  return lattice::build_operator(V, c.model.omega, theta, c.window(), tag,
                                 tag == lattice::OperatorTag::KleinGordon ? c.model.m : 0.0);
}

calculus::PropagatorCache propagator(const ExperimentConfig& c,
                                     const potential::TrigPolynomialPotential& V,
                                     const std::vector<double>& theta,
                                     const lattice::JacobiMatrix& T, Exec exec) {
  const lattice::CacheKey key{&V, c.model.omega, theta, c.half_width,
                              lattice::OperatorTag::KleinGordon, c.model.m};
  return calculus::PropagatorCache(lattice::cached_eigen(key, T, exec));
}

void write_trajectory(Context& ctx, const dynamics::Trajectory& tr, const std::string& stem) {
  if (ctx.csv()) {
    Csv csv({"t", "linf", "l2", "l4", "l6", "energy"});
    for (std::size_t k = 0; k < tr.size(); ++k)
      csv.row(std::vector<double>{tr.times[k], tr.linf[k], tr.l2[k], tr.l4[k], tr.l6[k], tr.energy[k]});
    ctx.out.write(stem + ".csv", csv.text());
  }
  if (ctx.bin()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < tr.size(); ++k)
      rows.push_back({tr.times[k], tr.linf[k], tr.l2[k], tr.l4[k], tr.l6[k], tr.energy[k]});
    ctx.out.write(stem + ".bin", report::f64_rows(rows));
    if (!tr.lean && !tr.U.empty()) {
      std::vector<std::vector<double>> states;
      for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto u = tr.U.col(k);
        states.emplace_back(u.begin(), u.end());
      }
      ctx.out.write(stem + "_states.bin", report::f64_rows(states));
    }
  }
}

double relative_energy_drift(const std::vector<double>& e) {
  double d = 0.0;
  const double e0 = std::abs(e.front());
  for (double x : e) d = std::max(d, std::abs(x - e.front()));
  return e0 > 0.0 ? d / e0 : d;
}

void run_spectrum(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto tag = c.run.op == "T" ? lattice::OperatorTag::KleinGordon : lattice::OperatorTag::Schrodinger;
  const auto thetas = c.theta_points();
  Csv csv({"theta_index", "index", "eigenvalue"});
  std::vector<std::vector<double>> rows;
  double worst_residual = 0.0, worst_order = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto J = build(c, V, thetas[i], tag);
    const auto eig = lattice::eigen(J, c.run.vectors, ctx.exec);
    for (std::size_t j = 0; j < eig.size(); ++j) {
      csv.row({std::to_string(i), std::to_string(j), report::cell(eig.values[j])});
      rows.push_back({static_cast<double>(i), static_cast<double>(j), eig.values[j]});
      if (j > 0) worst_order = std::max(worst_order, eig.values[j - 1] - eig.values[j]);
    }
    if (c.run.vectors) {
      for (std::size_t j = 0; j < eig.size(); ++j) {
        const auto q = eig.vectors.col(j);
        const auto Jq = lattice::apply(J, q);
        for (std::size_t r = 0; r < Jq.size(); ++r)
          worst_residual = std::max(worst_residual, std::abs(Jq[r] - eig.values[j] * q[r]));
      }
      if (ctx.bin()) {
        const auto& d = eig.vectors.data();
        ctx.out.write("eigenvectors" + suffix(i, thetas.size()) + ".bin",
                      std::string_view(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(double)));
      }
    }
  }
  if (ctx.csv()) ctx.out.write("eigenvalues.csv", csv.text());
  if (ctx.bin()) ctx.out.write("eigenvalues.bin", report::f64_rows(rows));
  ctx.check("eigenvalues ascending", "max(E_j - E_j+1) <= 0", worst_order, worst_order <= 0.0);
  if (c.run.vectors)
    ctx.check("eigen residual", "<= 1e-10", worst_residual, worst_residual <= 1e-10);
}

void run_rotation(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto& E = c.run.energies;
  const auto th = c.theta_points().front();
  std::vector<cocycle::RotationNumber> rn(E.size());
  std::vector<double> ly(E.size());
  const auto n = static_cast<std::ptrdiff_t>(E.size());
#pragma omp parallel for schedule(dynamic) if (ctx.exec.parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const auto r = cocycle::run_cocycle(E[iu], V, c.model.omega, th, c.run.n_iter);
    rn[iu] = cocycle::rotation_from_run(r);
    ly[iu] = std::max(0.0, r.log_growth / static_cast<double>(r.n_iter));
  }
  Csv csv({"E", "rho", "rho_err", "lyapunov"});
  std::vector<std::vector<double>> rows;
  double worst_err = 0.0, worst_free = 0.0;
  bool free_checked = false;
  for (std::size_t i = 0; i < E.size(); ++i) {
    csv.row(std::vector<double>{E[i], rn[i].rho, rn[i].error, ly[i]});
    rows.push_back({E[i], rn[i].rho, rn[i].error, ly[i]});
    worst_err = std::max(worst_err, rn[i].error);
    if (V.is_zero() && std::abs(E[i]) < 2.0) {
      free_checked = true;
      worst_free = std::max(worst_free, std::abs(rn[i].rho - std::acos(-E[i] / 2.0)));
    }
  }
  if (ctx.csv()) ctx.out.write("rotation.csv", csv.text());
  if (ctx.bin()) ctx.out.write("rotation.bin", report::f64_rows(rows));
  ctx.check("rotation error estimate", "<= 1e-4", worst_err, worst_err <= 1e-4);
  if (free_checked)
    ctx.check("free closed form |rho - arccos(-E/2)|", "<= 1e-4", worst_free, worst_free <= 1e-4);
}

void run_gaps(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& r = c.run;
  const auto V = c.potential();
  std::vector<double> grid;
  const auto steps = static_cast<std::size_t>(std::floor((r.e_max - r.e_min) / r.e_step + 1e-9));
  for (std::size_t i = 0; i <= steps; ++i) grid.push_back(r.e_min + r.e_step * static_cast<double>(i));
  cocycle::GapScanOptions opts{r.n_iter, r.rho_tol, r.k_label};
  const auto scan = cocycle::gap_scan(V, c.model.omega, c.theta_points(), c.window(), grid, opts, ctx.exec);

  const auto d = static_cast<std::size_t>(c.model.dimension);
  Csv csv({"E", "rho", "rho_err", "lyapunov", "count_below", "is_gap", "gap_k"});
  std::vector<std::vector<double>> rows;
  for (const auto& row : scan.rows) {
    std::string k;
    if (row.gap_k)
      for (std::size_t i = 0; i < row.gap_k->size(); ++i) k += (i ? ";" : "") + std::to_string((*row.gap_k)[i]);
    csv.row({report::cell(row.E), report::cell(row.rho), report::cell(row.rho_err), report::cell(row.lyapunov),
             std::to_string(row.count_below), row.is_gap ? "1" : "0", k});
    std::vector<double> b{row.E, row.rho, row.rho_err, row.lyapunov, static_cast<double>(row.count_below),
                          row.is_gap ? 1.0 : 0.0};
    for (std::size_t i = 0; i < d; ++i)
      b.push_back(row.gap_k ? static_cast<double>((*row.gap_k)[i]) : NAN);
    rows.push_back(std::move(b));
  }
  if (ctx.csv()) ctx.out.write("gaps.csv", csv.text());
  if (ctx.bin()) ctx.out.write("gaps.bin", report::f64_rows(rows));

  ordered_json gaps = ordered_json::array();
  std::size_t labeled = 0, inside_free_band = 0;
  double best_residual = INFINITY;
  for (const auto& g : scan.gaps) {
    gaps.push_back({{"E_lo", g.E_lo}, {"E_hi", g.E_hi}, {"rho", g.rho}, {"k", g.label.k},
                    {"residual", g.label.residual}, {"labeled", g.label.labeled},
                    {"candidates", g.label.candidates}});
    if (g.label.labeled && g.label.residual <= 1e-3) ++labeled;
    best_residual = std::min(best_residual, g.label.residual);
    if (g.E_hi > -2.0 && g.E_lo < 2.0) ++inside_free_band;
  }
  ctx.write_json("gaps.json", {{"gaps", gaps}, {"labeled_count", labeled}});
  if (V.is_zero()) {
    ctx.check("free model has no gaps inside (-2, 2)", "== 0", static_cast<double>(inside_free_band),
              inside_free_band == 0);
  } else {
    ctx.check("gaps labeled with residual <= 1e-3", ">= 1", static_cast<double>(labeled), labeled >= 1);
    ctx.check("best gap-label residual", "<= 1e-3", best_residual, best_residual <= 1e-3);
  }
}

std::vector<double> run_times(const config::RunConfig& r) {
  if (r.grid == "geometric") return oscillatory::geometric_grid(r.t_min, r.t_max, r.samples);
  std::vector<double> t(r.samples);
  for (std::size_t k = 0; k < r.samples; ++k)
    t[k] = r.t_min + (r.t_max - r.t_min) * static_cast<double>(k) / static_cast<double>(r.samples - 1);
  t.back() = r.t_max;
  return t;
}

void run_evolve(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto th = c.theta_points().front();
  const auto T = build(c, V, th, lattice::OperatorTag::KleinGordon);
  const auto cache = propagator(c, V, th, T, ctx.exec);
  const auto phi = c.data(c.run.phi), psi = c.data(c.run.psi);
  dynamics::LinearOptions lo;
  lo.lean = c.run.lean;
  const auto times = run_times(c.run);
  const auto tr = dynamics::evolve_linear(T, cache, phi, psi, times, lo, ctx.exec);
  write_trajectory(ctx, tr, "trajectory");
  const double drift = relative_energy_drift(tr.energy);
  ctx.check("light cone", ">= " + num(std::ceil(tr.cone.required)), static_cast<double>(tr.cone.half_width),
            tr.cone.satisfied);
  ctx.check("relative energy drift", "<= 1e-10", drift, drift <= 1e-10);
}

ordered_json decay_json(const dynamics::DecayReport& d) {
  return {{"tau_hat", d.tau_hat}, {"ci_low", d.ci_low}, {"ci_high", d.ci_high},
          {"t_lo", d.t_lo},       {"t_hi", d.t_hi},     {"r2", d.r2},
          {"K1_empirical", jnum(d.K1_empirical)},       {"peak_count", d.peak_count},
          {"caveat", d.caveat}};
}

void run_decay(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto thetas = c.theta_points();
  const auto phi = c.data(c.run.phi), psi = c.data(c.run.psi);
  const auto times = run_times(c.run);
  dynamics::LinearOptions lo;
  lo.lean = true;
  lo.velocity = false;
  std::vector<dynamics::DecayReport> reps;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const auto T = build(c, V, thetas[i], lattice::OperatorTag::KleinGordon);
    const auto cache = propagator(c, V, thetas[i], T, ctx.exec);
    const auto tr = dynamics::evolve_linear(T, cache, phi, psi, times, lo, ctx.exec);
    write_trajectory(ctx, tr, "trajectory" + suffix(i, thetas.size()));
    reps.push_back(dynamics::decay_fit(tr));
  }
  auto j = decay_json(reps.front());
  const std::string band = "in [" + num(c.run.accept_min) + ", " + num(c.run.accept_max) + "]";
  if (thetas.size() > 1) {
    ordered_json runs = ordered_json::array();
    std::vector<double> k1;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      auto r = decay_json(reps[i]);
      r["theta"] = thetas[i];
      runs.push_back(r);
      k1.push_back(reps[i].K1_empirical);
    }
    const double spread = dynamics::k1_spread(k1);
    j["theta_runs"] = runs;
    j["K1_spread"] = spread;
    ctx.write_json("decay.json", j);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      const double t = reps[i].tau_hat;
      ctx.check("tau_hat theta" + std::to_string(i), band, t, t >= c.run.accept_min && t <= c.run.accept_max);
      ctx.check("K1 finite theta" + std::to_string(i), "finite", reps[i].K1_empirical,
                std::isfinite(reps[i].K1_empirical));
    }
    ctx.check("K1 spread max/min - 1", "<= 0.25", spread, spread <= 0.25);
  } else {
    ctx.write_json("decay.json", j);
    const double t = reps.front().tau_hat;
    ctx.check("tau_hat", band, t, t >= c.run.accept_min && t <= c.run.accept_max);
    ctx.check("K1 finite", "finite", reps.front().K1_empirical, std::isfinite(reps.front().K1_empirical));
  }
}

void run_strichartz(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& r = c.run;
  const auto V = c.potential();
  const auto th = c.theta_points().front();
  const auto T = build(c, V, th, lattice::OperatorTag::KleinGordon);
  const auto cache = propagator(c, V, th, T, ctx.exec);
  const auto phi = c.data(r.phi), psi = c.data(r.psi);
  const double t_end = *std::max_element(r.t_values.begin(), r.t_values.end());
  const auto K = static_cast<std::size_t>(std::ceil(t_end / r.dt - 1e-9)) + 1;
  std::vector<double> times(K);
  for (std::size_t k = 0; k < K; ++k) times[k] = std::min(t_end, r.dt * static_cast<double>(k));
  dynamics::LinearOptions lo;
  lo.velocity = false;
  const auto tr = dynamics::evolve_linear(T, cache, phi, psi, times, lo, ctx.exec);
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < r.q.size(); ++i) pairs.emplace_back(r.q[i], r.r[i]);
  auto tv = r.t_values;
  std::sort(tv.begin(), tv.end());
  const auto rep = dynamics::strichartz_report(tr, r.tau, pairs, tv);

  ordered_json jp = ordered_json::array();
  for (const auto& p : rep.pairs) {
    ordered_json norms = ordered_json::array(), ratios = ordered_json::array();
    for (double x : p.norm) norms.push_back(jnum(x));
    for (double x : p.ratio) ratios.push_back(jnum(x));
    jp.push_back({{"q", jnum(p.q)}, {"r", jnum(p.r)}, {"norm", norms}, {"ratio", ratios}});
  }
  ctx.write_json("strichartz.json", {{"tau", rep.tau}, {"pairs", jp}, {"T_values", rep.T_values},
                                     {"saturation_delta", rep.saturation_delta}});
  if (ctx.csv()) {
    Csv csv({"q", "r", "T", "norm", "ratio"});
    for (const auto& p : rep.pairs)
      for (std::size_t i = 0; i < rep.T_values.size(); ++i)
        csv.row(std::vector<double>{p.q, p.r, rep.T_values[i], p.norm[i], p.ratio[i]});
    ctx.out.write("strichartz.csv", csv.text());
  }
  for (const auto& p : rep.pairs) {
    const std::string tag = "(" + report::cell(p.q) + ", " + report::cell(p.r) + ")";
    if (std::isinf(p.q) && p.r == 2.0) {
      const double worst = *std::max_element(p.ratio.begin(), p.ratio.end());
      ctx.check("energy pair " + tag + " ratio", "<= 1 + 1e-9", worst, worst <= 1.0 + 1e-9);
    } else {
      const double delta = std::abs(p.ratio.back() / p.ratio.front() - 1.0);
      ctx.check("saturation " + tag + " first to last T", "< 0.02", delta, delta < 0.02);
    }
  }
}

void run_nonlinear(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& r = c.run;
  const auto V = c.potential();
  const auto th = c.theta_points().front();
  const auto T = build(c, V, th, lattice::OperatorTag::KleinGordon);
  const auto cache = propagator(c, V, th, T, ctx.exec);
  const auto phi = c.data(r.phi), psi = c.data(r.psi);
  dynamics::NonlinearOptions no;
  no.record_every = r.record_every;
  const auto run = dynamics::evolve_nonlinear(T, cache, phi, psi, r.p, r.sign, r.dt, r.t_max, no, ctx.exec);
  write_trajectory(ctx, run.traj, "trajectory");
  ordered_json j{{"p", r.p},
                 {"sign", r.sign},
                 {"dt", r.dt},
                 {"steps", run.steps},
                 {"max_rel_drift", run.max_rel_drift},
                 {"blow_up", run.blow_up},
                 {"blow_up_time", run.blow_up_time}};
  ctx.check("no blow-up", "sup |u| < 1e6", run.blow_up ? run.blow_up_time : 0.0, !run.blow_up);
  ctx.check("relative energy drift", "<= 1e-5", run.max_rel_drift, run.max_rel_drift <= 1e-5);
  if (!run.blow_up && !r.r_list.empty()) {
    const auto sd = dynamics::small_data_report(run.traj, r.r_list);
    ordered_json rows = ordered_json::array();
    for (const auto& row : sd.rows) {
      rows.push_back({{"r", jnum(row.r)}, {"late_max", row.late_max}, {"global_max", row.global_max},
                      {"ratio", row.ratio}});
      ctx.check("late/global l^" + report::cell(row.r) + " max", "<= 0.5", row.ratio, row.ratio <= 0.5);
    }
    j["small_data"] = {{"rows", rows}, {"l2_sup", sd.l2_sup}, {"l2_initial", sd.l2_initial},
                       {"l2_ratio", sd.l2_ratio}};
    ctx.check("sup l2 / initial l2", "<= 1.1", sd.l2_ratio, sd.l2_ratio <= 1.1);
  }
  ctx.write_json("nonlinear.json", j);
}

void run_combes_thomas(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto th = c.theta_points().front();
  const auto T = build(c, V, th, lattice::OperatorTag::KleinGordon);
  const auto free_T = build(c, potential::TrigPolynomialPotential::zero(c.model.dimension), th,
                            lattice::OperatorTag::KleinGordon);
  const std::size_t k = c.window().offset(c.run.site);
  std::vector<calculus::CombesThomasFit> fits, free_fits;
  for (double z : c.run.z) {
    fits.push_back(calculus::combes_thomas_fit(T, z, k));
    free_fits.push_back(calculus::combes_thomas_fit(free_T, z, k));
  }
  const double cal = calculus::calibrate_combes_thomas(free_fits, c.run.calibration);
  ordered_json jf = ordered_json::array();
  for (std::size_t i = 0; i < c.run.z.size(); ++i) {
    const double z = c.run.z[i];
    const auto& f = fits[i];
    const auto col = calculus::resolvent_column(T, z, k);
    if (ctx.csv()) {
      Csv csv({"n", "abs_n_minus_k", "log10_abs_G"});
      for (std::size_t n = 0; n < col.values.size(); ++n) {
        const int site = c.window().site(n);
        csv.row({std::to_string(site), std::to_string(std::abs(site - c.run.site)),
                 report::cell(std::log10(std::abs(col.values[n])))});
      }
      ctx.out.write(c.run.z.size() > 1 ? "combes_thomas_z" + std::to_string(i) + ".csv" : "combes_thomas.csv",
                    csv.text());
    }
    const double bound = cal * f.delta / (1.0 + f.delta);
    const double nrm = calculus::resolvent_norm(T, z);
    const double nrm_power = calculus::resolvent_norm_power(T, z);
    jf.push_back({{"z", z}, {"delta", f.delta}, {"rate", f.rate}, {"prefactor", f.prefactor}, {"r2", f.r2},
                  {"points", f.points}, {"calibrated_bound", bound}, {"resolvent_norm", nrm},
                  {"resolvent_norm_power", nrm_power}});
    const std::string tag = " z=" + num(z);
    ctx.check("rate >= c delta/(1+delta)" + tag, ">= " + num(bound), f.rate, f.rate >= bound);
    const double worst = std::max(nrm, nrm_power);
    ctx.check("resolvent norm" + tag, "<= " + num(1.0 / f.delta + 1e-8), worst, worst <= 1.0 / f.delta + 1e-8);
    if (V.is_zero()) {
      const double a = 2.0 + c.model.m * c.model.m;
      const double exact = std::acosh((a - z) / 2.0);
      ctx.check("free rate vs arccosh((2+m^2-z)/2)" + tag, "<= 1e-3", std::abs(f.rate - exact),
                std::abs(f.rate - exact) <= 1e-3);
    }
  }
  ctx.write_json("combes_thomas.json", {{"site", c.run.site}, {"calibration_factor", c.run.calibration},
                                        {"c", cal}, {"fits", jf}});
}

void run_balakrishnan(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto V = c.potential();
  const auto th = c.theta_points().front();
  const auto T = build(c, V, th, lattice::OperatorTag::KleinGordon);
  const auto res = calculus::balakrishnan_inv_sqrt(T, c.run.nodes, ctx.exec);
  const auto ref = calculus::inv_sqrt_via_eigen(lattice::eigen(T, true, ctx.exec));
  const double err = calculus::max_abs_diff(res.K, ref);
  const double B1 = calculus::inv_sqrt_row_bound(res.K);
  ctx.write_json("balakrishnan.json", {{"nodes", res.nodes},
                                       {"s_max", res.s_max},
                                       {"tail_bound", res.tail_bound},
                                       {"tail_remainder", res.tail_remainder},
                                       {"max_abs_err_vs_eigen", err},
                                       {"row_bound_B1", B1}});
  if (ctx.bin()) {
    const auto& d = res.K.data();
    ctx.out.write("inv_sqrt.bin", std::string_view(reinterpret_cast<const char*>(d.data()), d.size() * sizeof(double)));
  }
  ctx.check("max abs error vs eigendecomposition", "<= 1e-8", err, err <= 1e-8);
  ctx.check("row bound B1 finite", "finite", B1, std::isfinite(B1));
}

void run_vdc(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto grid = oscillatory::geometric_grid(c.run.t_min, c.run.t_max, c.run.samples);
  const auto probe = oscillatory::vdc_decay_probe(c.model.m, grid, c.run.exponent, {}, ctx.exec);
  if (ctx.csv()) {
    Csv csv({"t", "sup_abs_K", "scaled_value", "n_argmax"});
    for (const auto& r : probe.rows)
      csv.row({report::cell(r.t), report::cell(r.sup_abs_K), report::cell(r.scaled), std::to_string(r.n_argmax)});
    ctx.out.write("vdc.csv", csv.text());
  }
  if (ctx.bin()) {
    std::vector<std::vector<double>> rows;
    for (const auto& r : probe.rows) rows.push_back({r.t, r.sup_abs_K, r.scaled, static_cast<double>(r.n_argmax)});
    ctx.out.write("vdc.bin", report::f64_rows(rows));
  }
  ctx.write_json("vdc.json", {{"exponent", probe.exponent}, {"ratio", probe.ratio}, {"growth", probe.growth}});
  ctx.check("max/min of t^a sup|K|", "<= 2", probe.ratio, probe.ratio <= 2.0);
}

} // namespace

report::RunReport run(const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string hash = config::config_hash(cfg);
  report::RunReport rep;
  rep.config = cfg.canonical;
  rep.version = report::version();
  try {
    OutputDir out(opts.out_dir ? *opts.out_dir : std::filesystem::path(cfg.output.dir));
    out.write("config.ini", config::emit_config(cfg));
    Context ctx{cfg, out, rep.checks, opts.exec};
    switch (cfg.run.kind) {
    case Kind::Spectrum: run_spectrum(ctx); break;
    case Kind::Rotation: run_rotation(ctx); break;
    case Kind::Gaps: run_gaps(ctx); break;
    case Kind::Evolve: run_evolve(ctx); break;
    case Kind::Decay: run_decay(ctx); break;
    case Kind::Strichartz: run_strichartz(ctx); break;
    case Kind::Nonlinear: run_nonlinear(ctx); break;
    case Kind::CombesThomas: run_combes_thomas(ctx); break;
    case Kind::Balakrishnan: run_balakrishnan(ctx); break;
    case Kind::VdcProbe: run_vdc(ctx); break;
    }
    rep.manifest = out.manifest();
    rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.write("report.json", report::to_json(rep));
  } catch (const Error& e) {
    throw RunError(e, cfg.run.kind, hash);
  }
  return rep;
}

} // namespace lkg::run
