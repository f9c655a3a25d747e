#pragma once

// Linear and nonlinear Klein-Gordon evolution on the truncated lattice,
// dispersive-decay fits, Strichartz mixed norms and energy accounting.

#include "lkg/calculus.hpp"
#include "lkg/dense.hpp"
#include "lkg/exec.hpp"
#include "lkg/lattice.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lkg::dynamics {

using calculus::WaveState;

/// N >= n_support + 1.05 v_max t_K + 10.
struct LightCone {
  int half_width = 0;
  double required = 0.0;
  bool satisfied = false;
};

LightCone light_cone(const lattice::LatticeWindow& window, std::span<const double> phi,
                     std::span<const double> psi, double mass, double t_max);

/// Recorded evolution. Full trajectories keep u (and v) as columns of M x K
/// matrices; lean ones keep only the per-time norms.
struct Trajectory {
  std::vector<double> times;
  DenseMatrix U;
  DenseMatrix V;
  bool lean = false;

  std::vector<double> linf, l2, l4, l6, energy;

  double data_l1 = 0.0;  // |phi|_1 + |psi|_1
  double data_l2 = 0.0;  // |phi|_2 + |psi|_2
  LightCone cone;

  std::size_t size() const { return times.size(); }
  /// Throws MissingStatesError on lean trajectories.
  WaveState state(std::size_t k) const;
};

/// q = 2 / (tau (1 - 2/r)); r = infinity is passed as INFINITY and r = 2 maps
/// to q = infinity.
double admissible_q(double tau, double r);
bool is_admissible(double tau, double q, double r, double tol = 1e-12);

double lp_norm(std::span<const double> u, double r);

struct SentinelOptions {
  int sites = 5;
  double rel = 1e-8;
};

/// Throws ContaminationError if the outermost `sites` entries on either side
/// exceed rel * max|u|.
void check_boundary(std::span<const double> u, double t, SentinelOptions opts = {});

struct LinearOptions {
  bool lean = false;
  /// Physical velocities are formed (one more product) when set; otherwise
  /// the energy column is evaluated on modal coefficients.
  bool velocity = true;
  std::size_t time_chunk = 64;
  SentinelOptions sentinel;
};

/// Exact-calculus flow at every requested time (no time stepping). Throws
/// WindowError before any work when the light cone does not fit.
Trajectory evolve_linear(const lattice::JacobiMatrix& T, const calculus::PropagatorCache& cache,
                         std::span<const double> phi, std::span<const double> psi,
                         std::span<const double> times, LinearOptions opts = {}, Exec exec = {});

struct DecayReport {
  double tau_hat;
  double ci_low, ci_high;
  double t_lo, t_hi;
  double r2;
  double K1_empirical;
  std::size_t peak_count;
  std::string caveat;
};

/// Regression of ln(envelope) on ln t over [t_K/20, t_K], the envelope being
/// a backward running max over 5 samples. data_l1 normalizes K1.
DecayReport decay_fit_series(std::span<const double> times, std::span<const double> f,
                             double data_l1 = 1.0);
DecayReport decay_fit(const Trajectory& traj);

/// (int_0^T |u(t)|_r^q dt)^{1/q} by the trapezoid rule; q or r infinite give
/// max norms.
double strichartz_norm(const Trajectory& traj, double q, double r);

struct StrichartzPair {
  double q, r;
  std::vector<double> norm;   // one per T value
  std::vector<double> ratio;  // norm / (|phi|_2 + |psi|_2)
};

struct StrichartzReport {
  double tau;
  std::vector<double> T_values;
  std::vector<StrichartzPair> pairs;
  double saturation_delta;  // max over pairs of |ratio(T_last)/ratio(T_first) - 1|
};

/// Evaluates each pair on the prefixes [0, T] of one trajectory.
StrichartzReport strichartz_report(const Trajectory& traj, double tau,
                                   std::span<const std::pair<double, double>> pairs,
                                   std::span<const double> T_values);

/// 1/2 |v|^2 + 1/2 <u, T u> - sign/(p+1) |u|_{p+1}^{p+1}.
double energy(const WaveState& s, const lattice::JacobiMatrix& T, double p, int sign);

struct NonlinearOptions {
  std::size_t record_every = 100;  // steps between recorded states
  double blowup_threshold = 1e6;
  SentinelOptions sentinel;
};

struct NonlinearRun {
  Trajectory traj;          // recorded states, energy column filled
  std::vector<double> step_energy;  // energy after every step (index 0 = initial)
  double max_rel_drift = 0.0;
  bool blow_up = false;
  double blow_up_time = 0.0;
  std::size_t steps = 0;
};

/// Strang splitting in modal coordinates: half kick
/// b += dt/2 sign Q^T(|u|^{p-1} u), exact rotation over dt, half kick.
/// sign = +1 focusing, -1 defocusing.
NonlinearRun evolve_nonlinear(const lattice::JacobiMatrix& T,
                              const calculus::PropagatorCache& cache,
                              std::span<const double> phi, std::span<const double> psi, double p,
                              int sign, double dt, double T_end, NonlinearOptions opts = {},
                              Exec exec = {});

struct SmallDataRow {
  double r;
  double late_max;
  double global_max;
  double ratio;
};

struct SmallDataReport {
  std::vector<SmallDataRow> rows;
  double l2_sup;
  double l2_initial;  // |phi|_2 + |psi|_2
  double l2_ratio;
};

SmallDataReport small_data_report(const Trajectory& traj, std::span<const double> r_list);

/// Empirical K1 spread over several runs: max/min - 1.
double k1_spread(std::span<const double> k1);

} // namespace lkg::dynamics
