#include "lkg/calculus.hpp"
#include "lkg/error.hpp"
#include "lkg/format.hpp"
#include "lkg/kernels.hpp"
#include "lkg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lkg::calculus {

using std::numbers::pi;
using cplx = std::complex<double>;

PropagatorCache::PropagatorCache(lattice::EigenDecomposition eig) {
  if (eig.size() == 0 || !eig.has_vectors())
    throw DomainError("propagator cache needs a full eigendecomposition");
  if (!(eig.values.front() > 0.0))
    throw PositivityError("T is not positive definite: mu_1 = " +
                          num(eig.values.front()) +
                          " (mass too small for the potential)");
  omega_.resize(eig.size());
  for (std::size_t j = 0; j < eig.size(); ++j) omega_[j] = std::sqrt(eig.values[j]);
  eig_ = std::make_shared<const lattice::EigenDecomposition>(std::move(eig));
}

PropagatorCache PropagatorCache::build(const lattice::JacobiMatrix& T, Exec exec) {
  if (lattice::eigen_count_below(T, 0.0) > 0)
    throw PositivityError("T has a non-positive eigenvalue (mass too small for the potential)");
  return PropagatorCache(lattice::eigen(T, true, exec));
}

std::vector<double> PropagatorCache::to_modal(std::span<const double> x, Exec exec) const {
  if (x.size() != size()) throw DimensionError("to_modal: vector does not match the window");
  std::vector<double> a(size());
  kernels::gemv_t(Q(), x, a, exec);
  return a;
}

std::vector<double> PropagatorCache::from_modal(std::span<const double> a, Exec exec) const {
  if (a.size() != size()) throw DimensionError("from_modal: vector does not match the window");
  std::vector<double> x(size());
  kernels::gemv(Q(), a, x, exec);
  return x;
}

ModalState to_modal(const PropagatorCache& cache, std::span<const double> phi,
                    std::span<const double> psi, Exec exec) {
  return {cache.to_modal(phi, exec), cache.to_modal(psi, exec)};
}

void rotate_modal(std::span<const double> omega, double t, ModalState& s) {
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const double w = omega[j];
    const double c = std::cos(w * t), sn = std::sin(w * t);
    const double a = s.a[j], b = s.b[j];
    s.a[j] = c * a + sn / w * b;
    s.b[j] = -w * sn * a + c * b;
  }
}

WaveState kg_propagate(const PropagatorCache& cache, std::span<const double> phi,
                       std::span<const double> psi, double t, Exec exec) {
  if (phi.size() != cache.size() || psi.size() != cache.size())
    throw DimensionError("kg_propagate: data does not match the window");
  WaveState out;
  out.t = t;
  if (t == 0.0) {
    out.u.assign(phi.begin(), phi.end());
    out.v.assign(psi.begin(), psi.end());
    return out;
  }
  auto s = to_modal(cache, phi, psi, exec);
  rotate_modal(cache.omega(), t, s);
  out.u = cache.from_modal(s.a, exec);
  out.v = cache.from_modal(s.b, exec);
  return out;
}

void kg_propagate_grid(const PropagatorCache& cache, const ModalState& data,
                       std::span<const double> times, DenseMatrix& U, DenseMatrix* V, Exec exec) {
  const std::size_t M = cache.size(), K = times.size();
  const auto w = cache.omega();
  DenseMatrix C(M, K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t j = 0; j < M; ++j)
      C(j, k) = std::cos(w[j] * times[k]) * data.a[j] + std::sin(w[j] * times[k]) / w[j] * data.b[j];
  U = DenseMatrix(M, K);
  kernels::gemm(cache.Q(), C, U, exec);
  if (V != nullptr) {
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t j = 0; j < M; ++j)
        C(j, k) = -w[j] * std::sin(w[j] * times[k]) * data.a[j] +
                  std::cos(w[j] * times[k]) * data.b[j];
    *V = DenseMatrix(M, K);
    kernels::gemm(cache.Q(), C, *V, exec);
  }
}

double linear_energy(const lattice::JacobiMatrix& T, std::span<const double> u,
                     std::span<const double> v) {
  const auto Tu = lattice::apply(T, u);
  double kin = 0.0, pot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    kin += v[i] * v[i];
    pot += u[i] * Tu[i];
  }
  return 0.5 * kin + 0.5 * pot;
}

// Resolvents.

double spectral_distance(const lattice::JacobiMatrix& T, cplx z) {
  const std::size_t M = T.size();
  const std::size_t below = lattice::eigen_count_below(T, z.real());
  double d = INFINITY;
  if (below > 0) d = std::min(d, std::abs(z - lattice::kth_eigenvalue(T, below - 1)));
  if (below < M) d = std::min(d, std::abs(z - lattice::kth_eigenvalue(T, below)));
  return d;
}

ResolventSolver::ResolventSolver(const lattice::JacobiMatrix& T, cplx z)
    : z_(z), delta_(spectral_distance(T, z)) {
  if (delta_ < 1e-6)
    throw NearSingularError("z lies within " + num(delta_) +
                            " of the spectrum (threshold 1e-6)");
  const std::size_t M = T.size();
  std::vector<cplx> off(T.off.begin(), T.off.end()), diag(M);
  for (std::size_t i = 0; i < M; ++i) diag[i] = T.diag[i] - z;
  lu_.factor(off, diag, off);
}

ResolventColumn ResolventSolver::column(std::size_t k) const {
  const std::size_t M = lu_.size();
  if (k >= M) throw DomainError("resolvent source site outside the window");
  ResolventColumn col{k, z_, std::vector<cplx>(M), delta_};
  col.values[k] = 1.0;
  lu_.solve(col.values);
  return col;
}

ResolventColumn resolvent_column(const lattice::JacobiMatrix& T, cplx z, std::size_t k) {
  return ResolventSolver(T, z).column(k);
}

CombesThomasFit combes_thomas_fit(const lattice::JacobiMatrix& T, cplx z, std::size_t k) {
  const auto col = resolvent_column(T, z, k);
  double gmax = 0.0;
  for (const auto& g : col.values) gmax = std::max(gmax, std::abs(g));
  const double hi = 1e-2 * gmax, lo = 1e-12;

  std::vector<double> xs, ys;
  for (std::size_t n = 0; n < col.values.size(); ++n) {
    const double g = std::abs(col.values[n]);
    if (g < lo || g > hi) continue;
    xs.push_back(std::abs(static_cast<double>(n) - static_cast<double>(k)));
    ys.push_back(std::log(g));
  }
  if (xs.size() < 3)
    throw WindowError("Combes-Thomas fit: fewer than 3 sites in the fit range; widen the window");
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (*ymax - *ymin < 8.0 * std::log(10.0))
    throw WindowError("Combes-Thomas fit: |G| spans fewer than 8 decades; widen the window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return {-slope, std::exp(my - slope * mx), r2, col.delta, xs.size()};
}

double calibrate_combes_thomas(std::span<const CombesThomasFit> free_fits, double factor) {
  if (free_fits.empty()) throw InsufficientDataError("calibration needs at least one free probe");
  double c = INFINITY;
  for (const auto& f : free_fits) c = std::min(c, f.rate * (1.0 + f.delta) / f.delta);
  return factor * c;
}

double resolvent_norm(const lattice::JacobiMatrix& T, cplx z) {
  const auto eig = lattice::eigen(T, false, Exec::serial());
  double dmin = INFINITY;
  for (double mu : eig.values) dmin = std::min(dmin, std::abs(mu - z));
  return 1.0 / dmin;
}

double resolvent_norm_power(const lattice::JacobiMatrix& T, cplx z, int max_iter,
                            double rel_tol) {
  const ResolventSolver R(T, z), Rh(T, std::conj(z));
  const std::size_t M = T.size();
  std::vector<cplx> x(M);
  for (std::size_t i = 0; i < M; ++i) x[i] = 1.0 + 0.25 * std::sin(1.0 + static_cast<double>(i));
  auto norm = [](const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
  };
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double nx = norm(x);
    for (auto& c : x) c /= nx;
    R.solve(x);
    Rh.solve(x);
    const double next = std::sqrt(norm(x));
    if (std::abs(next - est) <= rel_tol * next) return next;
    est = next;
  }
  return est;
}

// Inverse square root.

InvSqrtResult balakrishnan_inv_sqrt(const lattice::JacobiMatrix& T, std::size_t n_nodes,
                                    Exec exec) {
  if (n_nodes < 8) throw DomainError("balakrishnan_inv_sqrt requires n_nodes >= 8");
  const std::size_t M = T.size();
  if (M == 0) throw DomainError("empty operator");
  if (lattice::eigen_count_below(T, 0.0) > 0 || !(lattice::kth_eigenvalue(T, 0) > 0.0))
    throw PositivityError("T is not positive definite; T^{-1/2} is undefined");
  const double mu_max = lattice::kth_eigenvalue(T, M - 1);
  const double s_max = 40.0 * std::sqrt(mu_max);

  const auto& rule = gauss_legendre(n_nodes);
  std::vector<double> s(n_nodes), w(n_nodes);
  std::vector<TridiagLU<double>> lus(n_nodes);
  for (std::size_t q = 0; q < n_nodes; ++q) {
    s[q] = 0.5 * s_max * (rule.nodes[q] + 1.0);
    w[q] = 0.5 * s_max * rule.weights[q];
    std::vector<double> diag(M);
    for (std::size_t i = 0; i < M; ++i) diag[i] = T.diag[i] + s[q] * s[q];
    lus[q].factor(T.off, diag, T.off);
  }

  // Tail series terms: |T|^k / s_max^{2k+1} / (2k+1) until below 1e-18.
  const double tnorm = T.scale();
  std::size_t n_tail = 0;
  double term = 1.0 / s_max;
  while (term > 1e-18 && n_tail < 64) {
    ++n_tail;
    term *= tnorm / (s_max * s_max) * (2.0 * n_tail - 1.0) / (2.0 * n_tail + 1.0);
  }

  InvSqrtResult out{DenseMatrix(M, M), n_nodes, s_max, 2.0 / pi / s_max, 2.0 / pi * term};
  const auto cols = static_cast<std::ptrdiff_t>(M);
#pragma omp parallel for schedule(dynamic, 4) if (exec.parallel)
  for (std::ptrdiff_t jj = 0; jj < cols; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    std::vector<double> acc(M, 0.0), x(M);
    for (std::size_t q = 0; q < n_nodes; ++q) {
      std::fill(x.begin(), x.end(), 0.0);
      x[j] = 1.0;
      lus[q].solve(x);
      for (std::size_t i = 0; i < M; ++i) acc[i] += w[q] * x[i];
    }
    std::vector<double> p(M, 0.0);
    p[j] = 1.0;
    double scale = 1.0 / s_max;
    for (std::size_t k = 0; k < n_tail; ++k) {
      const double c = (k % 2 == 0 ? 1.0 : -1.0) * scale / (2.0 * static_cast<double>(k) + 1.0);
      for (std::size_t i = 0; i < M; ++i) acc[i] += c * p[i];
      p = lattice::apply(T, p);
      scale /= s_max * s_max;
    }
    auto col = out.K.col(j);
    for (std::size_t i = 0; i < M; ++i) col[i] = 2.0 / pi * acc[i];
  }
  return out;
}

DenseMatrix inv_sqrt_via_eigen(const lattice::EigenDecomposition& eig) {
  const std::size_t M = eig.size();
  if (!eig.has_vectors()) throw DomainError("inv_sqrt_via_eigen needs eigenvectors");
  if (M > 0 && !(eig.values.front() > 0.0)) throw PositivityError("T is not positive definite");
  DenseMatrix W(M, M), Qt(M, M), K(M, M);
  for (std::size_t j = 0; j < M; ++j) {
    const double f = 1.0 / std::sqrt(eig.values[j]);
    for (std::size_t i = 0; i < M; ++i) {
      W(i, j) = eig.vectors(i, j) * f;
      Qt(j, i) = eig.vectors(i, j);
    }
  }
  kernels::gemm(W, Qt, K, Exec::serial());
  return K;
}

double inv_sqrt_row_bound(const DenseMatrix& K) {
  if (K.rows() != K.cols()) throw DimensionError("row bound needs a square matrix");
  std::vector<double> rows(K.rows(), 0.0);
  for (std::size_t j = 0; j < K.cols(); ++j)
    for (std::size_t i = 0; i < K.rows(); ++i) rows[i] += std::abs(K(i, j));
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

double max_abs_diff(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) throw DimensionError("shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < A.data().size(); ++i)
    d = std::max(d, std::abs(A.data()[i] - B.data()[i]));
  return d;
}

} // namespace lkg::calculus
