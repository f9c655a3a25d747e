#include "lkg/kernels.hpp"
#include "lkg/tridiag_lu.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <random>

namespace lkg::kernels {

double sturm_pivmin(std::span<const double> off2) {
  double emax = 1.0;
  for (double e : off2) emax = std::max(emax, e);
  return DBL_MIN * emax;
}

std::size_t sturm_count(const TridiagView& J, std::span<const double> off2, double x,
                        double pivmin) {
  const std::size_t M = J.diag.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < M; ++i) {
    q = (J.diag[i] - x) - (i > 0 ? off2[i - 1] / q : 0.0);
    // An exact zero pivot means x is an eigenvalue of the leading block;
    // resolving it upward keeps the count strict.
    if (q == 0.0)
      q = pivmin;
    else if (std::abs(q) < pivmin)
      q = std::copysign(pivmin, q);
    count += q < 0.0;
  }
  return count;
}

std::pair<double, double> gershgorin(const TridiagView& J) {
  const std::size_t M = J.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < M; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(J.off[i - 1]);
    if (i + 1 < M) r += std::abs(J.off[i]);
    lo = std::min(lo, J.diag[i] - r);
    hi = std::max(hi, J.diag[i] + r);
  }
  return {lo, hi};
}

namespace detail {

void bisect_batch(const TridiagView& J, std::span<const double> off2, double pivmin,
                  double glo, double ghi, std::size_t first, std::size_t count, double tol,
                  double* out) {
  constexpr std::size_t B = kBisectBatch;
  double lo[B], hi[B], x[B], q[B];
  std::size_t cnt[B];
  bool done[B];
  for (std::size_t s = 0; s < B; ++s) {
    lo[s] = glo;
    hi[s] = ghi;
    done[s] = s >= count;
  }
  const std::size_t M = J.diag.size();
  for (;;) {
    bool any = false;
    for (std::size_t s = 0; s < B; ++s) {
      x[s] = 0.5 * (lo[s] + hi[s]);
      if (!done[s] && (hi[s] - lo[s] <= tol || x[s] <= lo[s] || x[s] >= hi[s])) done[s] = true;
      any = any || !done[s];
    }
    if (!any) break;

    // Interleaved Sturm recurrences for all shifts of the batch.
    for (std::size_t s = 0; s < B; ++s) {
      q[s] = 1.0;
      cnt[s] = 0;
    }
    for (std::size_t i = 0; i < M; ++i) {
      const double d = J.diag[i];
      const double e2 = i > 0 ? off2[i - 1] : 0.0;
      for (std::size_t s = 0; s < B; ++s) {
        double v = (d - x[s]) - e2 / q[s];
        if (v == 0.0)
          v = pivmin;
        else if (std::abs(v) < pivmin)
          v = std::copysign(pivmin, v);
        q[s] = v;
        cnt[s] += v < 0.0;
      }
    }
    for (std::size_t s = 0; s < B; ++s) {
      if (done[s]) continue;
      if (cnt[s] > first + s)
        hi[s] = x[s];
      else
        lo[s] = x[s];
    }
  }
  for (std::size_t s = 0; s < count; ++s) out[s] = 0.5 * (lo[s] + hi[s]);
}

void inverse_iteration_block(const TridiagView& J, std::span<const double> values, Block block,
                             double scale, DenseMatrix& Q) {
  const std::size_t M = J.diag.size();
  const double eps = std::numeric_limits<double>::epsilon();
  const double pertol = 10.0 * eps * scale;

  std::vector<double> sub(J.off.begin(), J.off.end());
  std::vector<double> diag(M);
  std::vector<double> x(M), prev(M);
  TridiagLU<double> lu;

  double shift_prev = -std::numeric_limits<double>::infinity();
  for (std::size_t j = block.first; j < block.last; ++j) {
    // Coincident shifts would reproduce the previous vector; separate them.
    double shift = values[j];
    if (j > block.first && shift - shift_prev < pertol) shift = shift_prev + pertol;
    shift_prev = shift;

    for (std::size_t i = 0; i < M; ++i) diag[i] = J.diag[i] - shift;
    lu.factor(sub, diag, sub, eps * scale);

    std::mt19937_64 rng(0x9E3779B97F4A7C15ull ^ (j + 1));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto& v : x) v = uni(rng);

    constexpr int kMinIts = 2;
    constexpr int kMaxIts = 8;
    for (int it = 0; it < kMaxIts; ++it) {
      double nrm = 0.0;
      for (double v : x) nrm += v * v;
      nrm = std::sqrt(nrm);
      for (std::size_t i = 0; i < M; ++i) prev[i] = x[i] / nrm;
      x = prev;
      lu.solve(x);
      // Modified Gram-Schmidt against the block's earlier vectors, twice.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = block.first; k < j; ++k) {
          auto qk = Q.col(k);
          double dot = 0.0;
          for (std::size_t i = 0; i < M; ++i) dot += qk[i] * x[i];
          for (std::size_t i = 0; i < M; ++i) x[i] -= dot * qk[i];
        }
      }
      nrm = 0.0;
      for (double v : x) nrm += v * v;
      nrm = std::sqrt(nrm);
      double overlap = 0.0;
      for (std::size_t i = 0; i < M; ++i) overlap += prev[i] * x[i];
      overlap = std::abs(overlap) / nrm;
      if (it + 1 >= kMinIts && 1.0 - overlap < 1e-14) break;
    }

    double nrm = 0.0;
    std::size_t imax = 0;
    for (std::size_t i = 0; i < M; ++i) {
      nrm += x[i] * x[i];
      if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    }
    nrm = std::sqrt(nrm);
    if (x[imax] < 0.0) nrm = -nrm;
    auto qj = Q.col(j);
    for (std::size_t i = 0; i < M; ++i) qj[i] = x[i] / nrm;
  }
}

void gemm_row_block(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U,
                    std::size_t row_begin, std::size_t row_end) {
  constexpr std::size_t kColTile = 16;
  const std::size_t inner = A.cols();
  const std::size_t K = B.cols();
  const std::size_t len = row_end - row_begin;
  for (std::size_t k0 = 0; k0 < K; k0 += kColTile) {
    const std::size_t k1 = std::min(K, k0 + kColTile);
    for (std::size_t k = k0; k < k1; ++k) {
      double* u = &U(row_begin, k);
      for (std::size_t i = 0; i < len; ++i) u[i] = 0.0;
    }
    for (std::size_t j = 0; j < inner; ++j) {
      const double* a = &A(row_begin, j);
      for (std::size_t k = k0; k < k1; ++k) {
        const double b = B(j, k);
        double* u = &U(row_begin, k);
        for (std::size_t i = 0; i < len; ++i) u[i] += a[i] * b;
      }
    }
  }
}

double cosine_sum_one(std::span<const double> nodes, std::span<const double> g, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    acc += g[i] * std::cos(static_cast<double>(n) * nodes[i]);
  return acc;
}

void cosine_sum_range(std::span<const double> nodes, std::span<const double> g,
                      std::span<double> out, std::size_t n_begin, std::size_t n_end) {
  // Chunks start at fixed multiples of kCosineChunk so every output element
  // sees the same recurrence no matter how chunks are distributed.
  constexpr std::size_t C = kCosineChunk;
  double acc[C];
  for (std::size_t c0 = n_begin; c0 < n_end; c0 += C) {
    const std::size_t c1 = std::min(n_end, c0 + C);
    const std::size_t len = c1 - c0;
    for (std::size_t k = 0; k < len; ++k) acc[k] = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double step_c = std::cos(nodes[i]);
      const double step_s = std::sin(nodes[i]);
      double c = std::cos(static_cast<double>(c0) * nodes[i]);
      double s = std::sin(static_cast<double>(c0) * nodes[i]);
      const double gi = g[i];
      for (std::size_t k = 0; k < len; ++k) {
        acc[k] += gi * c;
        const double cn = c * step_c - s * step_s;
        s = s * step_c + c * step_s;
        c = cn;
      }
    }
    for (std::size_t k = 0; k < len; ++k) out[c0 + k] = acc[k];
  }
}

} // namespace detail

namespace serial {

void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out) {
  std::vector<double> off2(J.off.size());
  for (std::size_t i = 0; i < off2.size(); ++i) off2[i] = J.off[i] * J.off[i];
  const double pivmin = sturm_pivmin(off2);
  auto [glo, ghi] = gershgorin(J);
  for (std::size_t b = first; b < last; b += detail::kBisectBatch) {
    const std::size_t cnt = std::min(detail::kBisectBatch, last - b);
    detail::bisect_batch(J, off2, pivmin, glo, ghi, b, cnt, tol, out.data() + (b - first));
  }
}

void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q) {
  for (const auto& blk : blocks) detail::inverse_iteration_block(J, values, blk, scale, Q);
}

void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U) {
  for (std::size_t r = 0; r < A.rows(); r += detail::kGemmRowBlock)
    detail::gemm_row_block(A, B, U, r, std::min(A.rows(), r + detail::kGemmRowBlock));
}

void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  for (std::size_t j = 0; j < A.cols(); ++j) {
    auto a = A.col(j);
    double acc = 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) acc += a[i] * x[i];
    y[j] = acc;
  }
}

void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < A.cols(); ++j) {
    auto a = A.col(j);
    const double xj = x[j];
    for (std::size_t i = 0; i < A.rows(); ++i) y[i] += a[i] * xj;
  }
}

void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out) {
  detail::cosine_sum_range(nodes, g, out, 0, out.size());
}

} // namespace serial

void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out, Exec exec) {
  exec.parallel ? omp::bisect_eigenvalues(J, first, last, tol, out)
                : serial::bisect_eigenvalues(J, first, last, tol, out);
}

void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q, Exec exec) {
  exec.parallel ? omp::inverse_iteration(J, values, blocks, scale, Q)
                : serial::inverse_iteration(J, values, blocks, scale, Q);
}

void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U, Exec exec) {
  exec.parallel ? omp::gemm(A, B, U) : serial::gemm(A, B, U);
}

void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec) {
  exec.parallel ? omp::gemv_t(A, x, y) : serial::gemv_t(A, x, y);
}

void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec) {
  exec.parallel ? omp::gemv(A, x, y) : serial::gemv(A, x, y);
}

void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out,
                Exec exec) {
  exec.parallel ? omp::cosine_sum(nodes, g, out) : serial::cosine_sum(nodes, g, out);
}

} // namespace lkg::kernels
