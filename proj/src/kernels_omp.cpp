#include "lkg/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace lkg {

void set_workers(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int workers() { return omp_get_max_threads(); }

} // namespace lkg

namespace lkg::kernels::omp {

void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out) {
  std::vector<double> off2(J.off.size());
  for (std::size_t i = 0; i < off2.size(); ++i) off2[i] = J.off[i] * J.off[i];
  const double pivmin = sturm_pivmin(off2);
  const auto [glo, ghi] = gershgorin(J);
  const std::size_t B = detail::kBisectBatch;
  const auto nbatch = static_cast<std::ptrdiff_t>((last - first + B - 1) / B);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t bi = 0; bi < nbatch; ++bi) {
    const std::size_t b = first + static_cast<std::size_t>(bi) * B;
    const std::size_t cnt = std::min(B, last - b);
    detail::bisect_batch(J, off2, pivmin, glo, ghi, b, cnt, tol, out.data() + (b - first));
  }
}

void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q) {
  const auto nb = static_cast<std::ptrdiff_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t b = 0; b < nb; ++b)
    detail::inverse_iteration_block(J, values, blocks[static_cast<std::size_t>(b)], scale, Q);
}

void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U) {
  const std::size_t R = detail::kGemmRowBlock;
  const auto nblk = static_cast<std::ptrdiff_t>((A.rows() + R - 1) / R);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < nblk; ++bi) {
    const std::size_t r = static_cast<std::size_t>(bi) * R;
    detail::gemm_row_block(A, B, U, r, std::min(A.rows(), r + R));
  }
}

void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(A.cols());
  const std::size_t rows = A.rows();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    auto a = A.col(static_cast<std::size_t>(j));
    double acc = 0.0;
    for (std::size_t i = 0; i < rows; ++i) acc += a[i] * x[i];
    y[static_cast<std::size_t>(j)] = acc;
  }
}

void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y) {
  const std::size_t R = detail::kGemmRowBlock;
  const std::size_t rows = A.rows();
  const auto nblk = static_cast<std::ptrdiff_t>((rows + R - 1) / R);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t bi = 0; bi < nblk; ++bi) {
    const std::size_t r0 = static_cast<std::size_t>(bi) * R;
    const std::size_t r1 = std::min(rows, r0 + R);
    for (std::size_t i = r0; i < r1; ++i) y[i] = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const double* a = &A(0, j);
      const double xj = x[j];
      for (std::size_t i = r0; i < r1; ++i) y[i] += a[i] * xj;
    }
  }
}

void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out) {
  const std::size_t C = detail::kCosineChunk;
  const auto nchunk = static_cast<std::ptrdiff_t>((out.size() + C - 1) / C);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < nchunk; ++c) {
    const std::size_t n0 = static_cast<std::size_t>(c) * C;
    detail::cosine_sum_range(nodes, g, out, n0, std::min(out.size(), n0 + C));
  }
}

} // namespace lkg::kernels::omp
