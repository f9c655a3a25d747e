#pragma once

// The SL(2,R) Schrodinger cocycle: transfer matrices, fibered rotation number
// through a continuous projective lift, Lyapunov exponent, and gap labels.

#include "lkg/exec.hpp"
#include "lkg/lattice.hpp"
#include "lkg/potential.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace lkg::cocycle {

struct TransferMatrix {
  double a, b, c, d;

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  TransferMatrix operator*(const TransferMatrix& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

/// A_0(E) + F_0(theta) = [[V(theta) - E, -1], [1, 0]].
TransferMatrix transfer(double E, const potential::TrigPolynomialPotential& V,
                        std::span<const double> theta);

/// Rescales P to unit determinant; only meaningful for det(P) > 0.
TransferMatrix renormalize(const TransferMatrix& P);

/// Increment of the continuous lift of the projective action of A on the
/// unit vector y. For Schrodinger matrices (c = 1, d = 0) the image of the
/// right half-plane lies in the upper half-plane, which pins the increment to
/// [-pi/2, 3pi/2).
double lift_increment(const TransferMatrix& A, double y0, double y1);

struct CocycleRun {
  double lift_total = 0.0;       // accumulated lift over n_iter steps
  double lift_half = 0.0;        // ... over the first n_iter/2 steps
  double log_growth = 0.0;       // sum of ln |A y| over n_iter steps
  std::size_t n_iter = 0;
  double min_increment = 0.0;
  double max_increment = 0.0;
};

/// Iterates y <- A_n y / |A_n y| with A_n = step(n) for n = 0..n_iter-1,
/// starting at the direction (cos phi0, sin phi0).
template <class Step>
CocycleRun iterate_cocycle(std::size_t n_iter, Step&& step, double phi0 = 0.0) {
  CocycleRun run;
  run.n_iter = n_iter;
  run.min_increment = INFINITY;
  run.max_increment = -INFINITY;
  double y0 = std::cos(phi0), y1 = std::sin(phi0);
  for (std::size_t n = 0; n < n_iter; ++n) {
    const TransferMatrix A = step(n);
    const double inc = lift_increment(A, y0, y1);
    run.min_increment = std::min(run.min_increment, inc);
    run.max_increment = std::max(run.max_increment, inc);
    run.lift_total += inc;
    const double z0 = A.a * y0 + A.b * y1;
    const double z1 = A.c * y0 + A.d * y1;
    const double nrm = std::hypot(z0, z1);
    run.log_growth += std::log(nrm);
    y0 = z0 / nrm;
    y1 = z1 / nrm;
    if (n + 1 == n_iter / 2) run.lift_half = run.lift_total;
  }
  return run;
}

/// Runs the Schrodinger cocycle at energy E along theta0 + n omega.
CocycleRun run_cocycle(double E, const potential::TrigPolynomialPotential& V,
                       std::span<const double> omega, std::span<const double> theta0,
                       std::size_t n_iter);

struct RotationNumber {
  double rho;     // in [0, pi]
  double error;   // |rho(n) - rho(n/2)| + pi/n
};

RotationNumber rotation_from_run(const CocycleRun& run);

RotationNumber rotation_number(double E, const potential::TrigPolynomialPotential& V,
                               std::span<const double> omega, std::span<const double> theta0,
                               std::size_t n_iter = 1'000'000);

double lyapunov(double E, const potential::TrigPolynomialPotential& V,
                std::span<const double> omega, std::span<const double> theta0,
                std::size_t n_iter = 1'000'000);

struct GapLabel {
  potential::Index k;
  double residual = 0.0;
  /// Every k with residual within twice the best one.
  std::vector<potential::Index> candidates;
  /// False when the best residual exceeds 1e-2 (unlabeled-gap warning).
  bool labeled = true;
};

/// k minimizing dist(rho - <k, omega>/2, pi Z) over |k|_inf <= K_label.
GapLabel gap_label(double rho, std::span<const double> omega, int K_label);

struct GapScanOptions {
  std::size_t n_iter = 100'000;
  double rho_tol = 1e-3;
  int k_label = 3;
};

struct ScanRow {
  double E;
  double rho;
  double rho_err;
  double lyapunov;
  std::size_t count_below;  // summed over the theta grid (union spectrum)
  bool is_gap = false;
  std::optional<potential::Index> gap_k;
};

struct Gap {
  double E_lo, E_hi;
  double rho;
  GapLabel label;
};

struct GapScan {
  std::vector<ScanRow> rows;
  std::vector<Gap> gaps;
};

/// Flags maximal runs of consecutive E-grid points where the union
/// eigenvalue count is flat and rho is constant to rho_tol.
GapScan gap_scan(const potential::TrigPolynomialPotential& V, std::span<const double> omega,
                 const std::vector<std::vector<double>>& theta_grid,
                 const lattice::LatticeWindow& window, std::span<const double> E_grid,
                 GapScanOptions opts = {}, Exec exec = {});

} // namespace lkg::cocycle
