#pragma once

// Data-parallel inner loops. Each kernel exists twice with identical
// signatures: `serial::` is the reference implementation kept for testing and
// benchmarking, `omp::` partitions independent output elements across OpenMP
// threads. The two must agree bit for bit.

#include "lkg/dense.hpp"
#include "lkg/exec.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lkg::kernels {

/// Symmetric tridiagonal matrix in the form the Sturm kernels consume.
struct TridiagView {
  std::span<const double> diag;  // length M
  std::span<const double> off;   // length M-1
};

/// Number of eigenvalues strictly below x (one LDL^T pass).
std::size_t sturm_count(const TridiagView& J, std::span<const double> off2, double x,
                        double pivmin);

/// Smallest safe pivot used by the Sturm recurrences.
double sturm_pivmin(std::span<const double> off2);

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin(const TridiagView& J);

/// Eigenvector blocks: consecutive eigenvalue index ranges [first, last)
/// that are reorthogonalized together.
struct Block {
  std::size_t first;
  std::size_t last;
};

namespace serial {
/// Eigenvalues with indices [first, last) (ascending, 0-based) by bisection on
/// the Sturm count, to absolute tolerance `tol`. Writes into out[0..last-first).
void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out);

/// Inverse iteration for every block; Q must be M x M and values ascending.
void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q);

/// U = A * B for column-major dense matrices.
void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U);

/// y = A^T x.
void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y);

/// y = A x.
void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y);

/// out[n] = sum_i g[i] * cos(n * nodes[i]) for n = 0..out.size()-1.
void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out);
} // namespace serial

namespace omp {
void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out);
void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q);
void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U);
void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y);
void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y);
void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out);
} // namespace omp

// Dispatchers.
void bisect_eigenvalues(const TridiagView& J, std::size_t first, std::size_t last, double tol,
                        std::span<double> out, Exec exec);
void inverse_iteration(const TridiagView& J, std::span<const double> values,
                       std::span<const Block> blocks, double scale, DenseMatrix& Q, Exec exec);
void gemm(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U, Exec exec);
void gemv_t(const DenseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec);
void gemv(const DenseMatrix& A, std::span<const double> x, std::span<double> y, Exec exec);
void cosine_sum(std::span<const double> nodes, std::span<const double> g, std::span<double> out,
                Exec exec);

// Building blocks shared by both variants.
namespace detail {
/// Bisects `count` consecutive eigenvalues starting at index `first` in
/// lockstep so the Sturm recurrences interleave.
void bisect_batch(const TridiagView& J, std::span<const double> off2, double pivmin,
                  double glo, double ghi, std::size_t first, std::size_t count, double tol,
                  double* out);
void inverse_iteration_block(const TridiagView& J, std::span<const double> values, Block block,
                             double scale, DenseMatrix& Q);
void gemm_row_block(const DenseMatrix& A, const DenseMatrix& B, DenseMatrix& U,
                    std::size_t row_begin, std::size_t row_end);
double cosine_sum_one(std::span<const double> nodes, std::span<const double> g, std::size_t n);
void cosine_sum_range(std::span<const double> nodes, std::span<const double> g,
                      std::span<double> out, std::size_t n_begin, std::size_t n_end);
inline constexpr std::size_t kBisectBatch = 8;
inline constexpr std::size_t kGemmRowBlock = 128;
inline constexpr std::size_t kCosineChunk = 64;
} // namespace detail

} // namespace lkg::kernels
