#include "lkg/lattice.hpp"
#include "lkg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lkg::lattice {

LatticeWindow::LatticeWindow(int half_width) : N_(half_width) {
  if (half_width < 0) throw DomainError("lattice half-width must be non-negative");
}

std::size_t LatticeWindow::offset(int site) const {
  if (site < -N_ || site > N_)
    throw DomainError("site " + std::to_string(site) + " outside window of half-width " +
                      std::to_string(N_));
  return static_cast<std::size_t>(site + N_);
}

const char* to_string(OperatorTag tag) {
  return tag == OperatorTag::Schrodinger ? "H" : "T";
}

double JacobiMatrix::scale() const {
  double s = 1.0;
  const std::size_t M = size();
  for (std::size_t i = 0; i < M; ++i) {
    double r = std::abs(diag[i]);
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < M) r += std::abs(off[i]);
    s = std::max(s, r);
  }
  return s;
}

JacobiMatrix build_operator(const potential::TrigPolynomialPotential& V,
                            std::span<const double> omega, std::span<const double> theta,
                            const LatticeWindow& window, OperatorTag tag, double m) {
  const auto d = static_cast<std::size_t>(V.dimension());
  if (omega.size() != d || theta.size() != d)
    throw DimensionError("omega/theta dimension does not match the potential");
  if (tag == OperatorTag::KleinGordon && !(m > 0.0))
    throw DomainError("Klein-Gordon operator requires m > 0 (m = 0 is the discrete wave "
                      "equation, which has no l1 -> l_inf decay)");

  JacobiMatrix J;
  J.tag = tag;
  J.mass = tag == OperatorTag::KleinGordon ? m : 0.0;
  const std::size_t M = window.size();
  J.diag.resize(M);
  J.off.assign(M > 0 ? M - 1 : 0, -1.0);
  const double shift = tag == OperatorTag::KleinGordon ? 2.0 + m * m : 0.0;
  std::vector<double> point(d);
  for (std::size_t i = 0; i < M; ++i) {
    const double n = window.site(i);
    for (std::size_t c = 0; c < d; ++c) point[c] = theta[c] + n * omega[c];
    J.diag[i] = shift + potential::evaluate(V, point);
  }
  return J;
}

std::vector<double> apply(const JacobiMatrix& J, std::span<const double> x) {
  const std::size_t M = J.size();
  if (x.size() != M)
    throw DimensionError("apply: vector length " + std::to_string(x.size()) +
                         " does not match matrix size " + std::to_string(M));
  std::vector<double> y(M);
  for (std::size_t i = 0; i < M; ++i) {
    double acc = J.diag[i] * x[i];
    if (i > 0) acc += J.off[i - 1] * x[i - 1];
    if (i + 1 < M) acc += J.off[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

std::vector<kernels::Block> cluster_blocks(std::span<const double> values, double gap) {
  std::vector<kernels::Block> blocks;
  std::size_t start = 0;
  for (std::size_t j = 1; j <= values.size(); ++j) {
    if (j == values.size() || values[j] - values[j - 1] >= gap) {
      blocks.push_back({start, j});
      start = j;
    }
  }
  return blocks;
}

EigenDecomposition eigen(const JacobiMatrix& J, bool want_vectors, Exec exec, EigenOptions opts) {
  const std::size_t M = J.size();
  EigenDecomposition out;
  if (M == 0) return out;
  const double scale = J.scale();
  out.values.resize(M);
  kernels::bisect_eigenvalues(J.view(), 0, M, opts.abs_tol * scale, out.values, exec);
  if (want_vectors) {
    out.vectors = DenseMatrix(M, M);
    const auto blocks = cluster_blocks(out.values, opts.reorth_gap * scale);
    kernels::inverse_iteration(J.view(), out.values, blocks, scale, out.vectors, exec);
  }
  return out;
}

std::size_t eigen_count_below(const JacobiMatrix& J, double E) {
  std::vector<double> off2(J.off.size());
  for (std::size_t i = 0; i < off2.size(); ++i) off2[i] = J.off[i] * J.off[i];
  return kernels::sturm_count(J.view(), off2, E, kernels::sturm_pivmin(off2));
}

double kth_eigenvalue(const JacobiMatrix& J, std::size_t idx, double abs_tol) {
  if (idx >= J.size()) throw DomainError("eigenvalue index out of range");
  double v = 0.0;
  kernels::serial::bisect_eigenvalues(J.view(), idx, idx + 1, abs_tol * J.scale(), {&v, 1});
  return v;
}

} // namespace lkg::lattice
