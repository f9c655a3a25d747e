#pragma once

// Test-side reference computations that share no code with the library:
// dense cyclic Jacobi eigensolver, complex Gaussian elimination, 3x3
// inverses, finite differences, RK4 for the linear flow, brute-force gap
// labels.

#include "lkg/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat dense(const lkg::lattice::JacobiMatrix& J) {
  const std::size_t M = J.size();
  Mat A(M, std::vector<double>(M, 0.0));
  for (std::size_t i = 0; i < M; ++i) {
    A[i][i] = J.diag[i];
    if (i + 1 < M) A[i][i + 1] = A[i + 1][i] = J.off[i];
  }
  return A;
}

struct Eig {
  std::vector<double> values;  // ascending
  Mat vectors;                 // vectors[i][j]: component i of eigenvector j
};

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
inline Eig jacobi_eigen(Mat A) {
  const std::size_t n = A.size();
  Mat V(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) V[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(A[p][q]) < 1e-300) continue;
        const double theta = (A[q][q] - A[p][p]) / (2.0 * A[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = A[k][p], akq = A[k][q];
          A[k][p] = c * akp - s * akq;
          A[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = A[p][k], aqk = A[q][k];
          A[p][k] = c * apk - s * aqk;
          A[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = V[k][p], vkq = V[k][q];
          V[k][p] = c * vkp - s * vkq;
          V[k][q] = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return A[a][a] < A[b][b]; });
  Eig e;
  e.vectors.assign(n, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    e.values.push_back(A[idx[j]][idx[j]]);
    for (std::size_t i = 0; i < n; ++i) e.vectors[i][j] = V[i][idx[j]];
  }
  return e;
}

/// Q f(Lambda) Q^T.
inline Mat matrix_function(const Eig& e, const std::function<double(double)>& f) {
  const std::size_t n = e.values.size();
  Mat F(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) F[i][j] += e.vectors[i][k] * fk * e.vectors[j][k];
  }
  return F;
}

inline std::vector<double> matvec(const Mat& A, const std::vector<double>& x) {
  std::vector<double> y(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  return y;
}

/// Solves (A - z) x = b by Gaussian elimination with partial pivoting.
inline std::vector<std::complex<double>> shifted_solve(const Mat& A, std::complex<double> z,
                                                       std::vector<std::complex<double>> b) {
  const std::size_t n = A.size();
  std::vector<std::vector<std::complex<double>>> B(n, std::vector<std::complex<double>>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B[i][j] = A[i][j] - (i == j ? z : 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(B[r][c]) > std::abs(B[piv][c])) piv = r;
    std::swap(B[c], B[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const auto f = B[r][c] / B[c][c];
      for (std::size_t k = c; k < n; ++k) B[r][k] -= f * B[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = n; i-- > 0;) {
    auto s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= B[i][k] * x[k];
    x[i] = s / B[i][i];
  }
  return x;
}

/// Adjugate formula for a complex 3x3 inverse.
inline std::array<std::array<std::complex<double>, 3>, 3> inverse3(
    const std::array<std::array<std::complex<double>, 3>, 3>& a) {
  std::array<std::array<std::complex<double>, 3>, 3> c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      c[j][i] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
    }
  const auto det = a[0][0] * c[0][0] + a[0][1] * c[1][0] + a[0][2] * c[2][0];
  for (auto& row : c)
    for (auto& x : row) x /= det;
  return c;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// u'' = -T u by classical RK4 on (u, v).
inline std::pair<std::vector<double>, std::vector<double>> rk4_linear(const Mat& T, std::vector<double> u,
                                                                      std::vector<double> v, double t_end,
                                                                      std::size_t steps) {
  const double h = t_end / static_cast<double>(steps);
  const std::size_t n = u.size();
  auto acc = [&](const std::vector<double>& x) {
    auto y = matvec(T, x);
    for (auto& e : y) e = -e;
    return y;
  };
  auto axpy = [&](const std::vector<double>& x, double a, const std::vector<double>& d) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * d[i];
    return y;
  };
  for (std::size_t s = 0; s < steps; ++s) {
    const auto k1u = v, k1v = acc(u);
    const auto k2u = axpy(v, h / 2, k1v), k2v = acc(axpy(u, h / 2, k1u));
    const auto k3u = axpy(v, h / 2, k2v), k3v = acc(axpy(u, h / 2, k2u));
    const auto k4u = axpy(v, h, k3v), k4v = acc(axpy(u, h, k3u));
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += h / 6 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
      v[i] += h / 6 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
  }
  return {u, v};
}

/// Enumerates k in [-K, K] and returns the minimizer of dist(rho - k omega / 2, pi Z).
inline std::pair<int, double> brute_gap_label(double rho, double omega, int K) {
  const double pi = std::numbers::pi;
  int best = 0;
  double best_r = INFINITY;
  for (int k = -K; k <= K; ++k) {
    const double x = rho - k * omega / 2.0;
    const double r = std::abs(x - pi * std::round(x / pi));
    if (r < best_r) {
      best_r = r;
      best = k;
    }
  }
  return {best, best_r};
}

} // namespace oracle
