#pragma once

// Functional calculus on truncated operators: the Klein-Gordon propagator
// cos(tA), A^{-1} sin(tA) with A = sqrt(T), resolvent columns with their
// Combes-Thomas decay fit, and the Balakrishnan quadrature for T^{-1/2}.

#include "lkg/dense.hpp"
#include "lkg/exec.hpp"
#include "lkg/lattice.hpp"
#include "lkg/tridiag_lu.hpp"

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace lkg::calculus {

/// Displacement u and velocity v = du/dt at time t over the lattice window.
struct WaveState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;
};

/// Eigendecomposition of T = G + m^2 together with Omega_j = sqrt(mu_j).
/// Immutable once built; copies share the decomposition.
class PropagatorCache {
public:
  /// Throws PositivityError unless mu_1 > 0.
  explicit PropagatorCache(lattice::EigenDecomposition eig);

  static PropagatorCache build(const lattice::JacobiMatrix& T, Exec exec = {});

  std::size_t size() const { return eig_->size(); }
  const lattice::EigenDecomposition& eig() const { return *eig_; }
  const DenseMatrix& Q() const { return eig_->vectors; }
  std::span<const double> omega() const { return omega_; }

  /// Q^T x and Q a.
  std::vector<double> to_modal(std::span<const double> x, Exec exec = {}) const;
  std::vector<double> from_modal(std::span<const double> a, Exec exec = {}) const;

private:
  std::shared_ptr<const lattice::EigenDecomposition> eig_;
  std::vector<double> omega_;
};

/// Modal data a = Q^T phi, b = Q^T psi.
struct ModalState {
  std::vector<double> a;
  std::vector<double> b;
};

ModalState to_modal(const PropagatorCache& cache, std::span<const double> phi,
                    std::span<const double> psi, Exec exec = {});

/// Exact modal flow: a_j <- cos(W t) a_j + sin(W t)/W b_j,
/// b_j <- -W sin(W t) a_j + cos(W t) b_j.
void rotate_modal(std::span<const double> omega, double t, ModalState& s);

WaveState kg_propagate(const PropagatorCache& cache, std::span<const double> phi,
                       std::span<const double> psi, double t, Exec exec = {});

/// u(t_k) (and v(t_k) when V is non-null) for all k at once, as columns of
/// M x K matrices, through one dense product Q * C.
void kg_propagate_grid(const PropagatorCache& cache, const ModalState& data,
                       std::span<const double> times, DenseMatrix& U, DenseMatrix* V,
                       Exec exec = {});

/// 1/2 |v|^2 + 1/2 <u, T u>.
double linear_energy(const lattice::JacobiMatrix& T, std::span<const double> u,
                     std::span<const double> v);

// Resolvents.

struct ResolventColumn {
  std::size_t k;               // source offset in the window
  std::complex<double> z;
  std::vector<std::complex<double>> values;  // G(n, k) for every window offset n
  double delta;                // dist(z, spectrum of the truncated T)
};

/// Distance from z to the spectrum of the truncated operator, located by
/// Sturm counts and bisection.
double spectral_distance(const lattice::JacobiMatrix& T, std::complex<double> z);

/// Factors T - z once; columns are then one O(M) solve each.
class ResolventSolver {
public:
  /// Throws NearSingularError when dist(z, spectrum) < 1e-6.
  ResolventSolver(const lattice::JacobiMatrix& T, std::complex<double> z);

  ResolventColumn column(std::size_t k) const;
  void solve(std::span<std::complex<double>> b) const { lu_.solve(b); }
  double delta() const { return delta_; }
  std::complex<double> z() const { return z_; }

private:
  std::complex<double> z_;
  double delta_;
  TridiagLU<std::complex<double>> lu_;
};

ResolventColumn resolvent_column(const lattice::JacobiMatrix& T, std::complex<double> z,
                                 std::size_t k);

struct CombesThomasFit {
  double rate;        // fitted decay rate of |G(n, k)| in |n - k|
  double prefactor;   // exp(intercept)
  double r2;
  double delta;
  std::size_t points;
};

/// Least squares of ln|G(n,k)| against |n-k| over the sites where
/// |G| lies in [1e-12, 1e-2 max|G|]. Throws WindowError when |G| does not
/// span 8 decades inside the window.
CombesThomasFit combes_thomas_fit(const lattice::JacobiMatrix& T, std::complex<double> z,
                                  std::size_t k);

/// c = factor * min over the probes of rate (1 + delta) / delta.
double calibrate_combes_thomas(std::span<const CombesThomasFit> free_fits, double factor = 0.5);

/// ||(T - z)^{-1}||_2 from the full eigenvalue list: 1 / min_j |mu_j - z|.
double resolvent_norm(const lattice::JacobiMatrix& T, std::complex<double> z);

/// Power-iteration estimate of the same norm (a lower bound that converges
/// to it), independent of the eigensolver.
double resolvent_norm_power(const lattice::JacobiMatrix& T, std::complex<double> z,
                            int max_iter = 2000, double rel_tol = 1e-13);

// Inverse square root.

struct InvSqrtResult {
  DenseMatrix K;              // approximates T^{-1/2}
  std::size_t nodes;
  double s_max;               // 40 sqrt(mu_M)
  double tail_bound;          // (2/pi) / s_max, the uncorrected tail
  double tail_remainder;      // bound on what the tail series leaves out
};

/// T^{-1/2} = (2/pi) int_0^inf (T + s^2)^{-1} ds: Gauss-Legendre on
/// [0, s_max] plus the convergent tail series
/// sum_k (-1)^k T^k s_max^{-(2k+1)} / (2k+1).
InvSqrtResult balakrishnan_inv_sqrt(const lattice::JacobiMatrix& T, std::size_t n_nodes,
                                    Exec exec = {});

/// Q diag(mu^{-1/2}) Q^T.
DenseMatrix inv_sqrt_via_eigen(const lattice::EigenDecomposition& eig);

/// max_n sum_k |K(n,k)|.
double inv_sqrt_row_bound(const DenseMatrix& K);

double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B);

} // namespace lkg::calculus
