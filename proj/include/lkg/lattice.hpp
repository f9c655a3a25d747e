#pragma once

// Truncated lattice operators (Dirichlet window of Z) as symmetric tridiagonal
// matrices, and the Sturm-bisection / inverse-iteration eigensolver.

#include "lkg/dense.hpp"
#include "lkg/exec.hpp"
#include "lkg/kernels.hpp"
#include "lkg/potential.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lkg::lattice {

/// Sites n in {-N, ..., N}; array offset i = n + N.
class LatticeWindow {
public:
  explicit LatticeWindow(int half_width);
  int half_width() const { return N_; }
  std::size_t size() const { return static_cast<std::size_t>(2 * N_ + 1); }
  int site(std::size_t offset) const { return static_cast<int>(offset) - N_; }
  std::size_t offset(int site) const;

private:
  int N_;
};

enum class OperatorTag { Schrodinger, KleinGordon };

const char* to_string(OperatorTag tag);

/// Symmetric tridiagonal matrix. Lattice operators have off-diagonal -1; the
/// general form is kept so diagonal probes and random test instances fit too.
struct JacobiMatrix {
  std::vector<double> diag;
  std::vector<double> off;
  OperatorTag tag = OperatorTag::Schrodinger;
  double mass = 0.0;

  std::size_t size() const { return diag.size(); }
  kernels::TridiagView view() const { return {diag, off}; }
  /// max(1, ||J||_inf)
  double scale() const;
};

/// H: d_n = V(theta + n omega); T: d_n = 2 + m^2 + V(theta + n omega).
JacobiMatrix build_operator(const potential::TrigPolynomialPotential& V,
                            std::span<const double> omega, std::span<const double> theta,
                            const LatticeWindow& window, OperatorTag tag, double m = 0.0);

/// (Jx)_n = d_n x_n + e_{n-1} x_{n-1} + e_n x_{n+1}, zero outside the window.
std::vector<double> apply(const JacobiMatrix& J, std::span<const double> x);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j belongs to values[j]; empty if not requested
  bool has_vectors() const { return !vectors.empty(); }
  std::size_t size() const { return values.size(); }
};

struct EigenOptions {
  /// Bisection stops once the bracket is below abs_tol * scale.
  double abs_tol = 1e-12;
  /// Consecutive eigenvalues closer than reorth_gap * scale share a
  /// reorthogonalization block.
  double reorth_gap = 1e-5;
};

EigenDecomposition eigen(const JacobiMatrix& J, bool want_vectors, Exec exec = {},
                         EigenOptions opts = {});

/// Number of eigenvalues strictly below E; one Sturm pass.
std::size_t eigen_count_below(const JacobiMatrix& J, double E);

/// The idx-th smallest eigenvalue (0-based) by bisection.
double kth_eigenvalue(const JacobiMatrix& J, std::size_t idx, double abs_tol = 1e-13);

/// Reorthogonalization blocks for ascending eigenvalues.
std::vector<kernels::Block> cluster_blocks(std::span<const double> values, double gap);

// Optional on-disk cache ("LKG1" files), keyed by a content hash.

struct CacheKey {
  const potential::TrigPolynomialPotential* V;
  std::span<const double> omega;
  std::span<const double> theta;
  int half_width;
  OperatorTag tag;
  double mass;
};

/// Hex SHA-256 over the canonical byte encoding of the key.
std::string cache_key_hash(const CacheKey& key);

void save_decomposition(const std::filesystem::path& path, const EigenDecomposition& eig);
EigenDecomposition load_decomposition(const std::filesystem::path& path);

/// Reads from / writes to $LKG_CACHE_DIR when it is set; otherwise just calls
/// eigen(J, true).
EigenDecomposition cached_eigen(const CacheKey& key, const JacobiMatrix& J, Exec exec = {});

} // namespace lkg::lattice
