#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lkg {

/// LU factorization with partial pivoting of a general tridiagonal matrix,
/// following the LAPACK ?gttrf/?gttrs layout (U gains a second
/// superdiagonal when rows are interchanged). Factor once, solve many.
template <class Scalar>
class TridiagLU {
public:
  TridiagLU() = default;

  /// sub[i] = A(i+1,i), diag[i] = A(i,i), super[i] = A(i,i+1).
  /// Pivots smaller in magnitude than `pivot_floor` are replaced by it
  /// (keeping their sign); inverse iteration relies on this.
  TridiagLU(std::span<const Scalar> sub, std::span<const Scalar> diag,
            std::span<const Scalar> super, double pivot_floor = 0.0) {
    factor(sub, diag, super, pivot_floor);
  }

  void factor(std::span<const Scalar> sub, std::span<const Scalar> diag,
              std::span<const Scalar> super, double pivot_floor = 0.0) {
    n_ = diag.size();
    d_.assign(diag.begin(), diag.end());
    dl_.assign(sub.begin(), sub.end());
    du_.assign(super.begin(), super.end());
    du2_.assign(n_ > 2 ? n_ - 2 : 0, Scalar{});
    swap_.assign(n_ > 1 ? n_ - 1 : 0, 0);
    min_pivot_ = INFINITY;

    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != Scalar{}) {
          const Scalar fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        } else {
          dl_[i] = Scalar{};
        }
      } else {
        const Scalar fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const Scalar temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swap_[i] = 1;
      }
    }
    for (auto& p : d_) {
      const double a = std::abs(p);
      if (a < pivot_floor) p = a == 0.0 ? Scalar(pivot_floor) : p * (pivot_floor / a);
      min_pivot_ = std::min(min_pivot_, std::abs(p));
    }
  }

  std::size_t size() const { return n_; }
  double min_pivot() const { return min_pivot_; }

  /// Overwrites b with A^{-1} b.
  void solve(std::span<Scalar> b) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (!swap_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const Scalar temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    if (n_ == 0) return;
    b[n_ - 1] /= d_[n_ - 1];
    if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
    for (std::size_t k = n_ >= 2 ? n_ - 2 : 0; k-- > 0;)
      b[k] = (b[k] - du_[k] * b[k + 1] - du2_[k] * b[k + 2]) / d_[k];
  }

private:
  std::size_t n_ = 0;
  std::vector<Scalar> dl_, d_, du_, du2_;
  std::vector<unsigned char> swap_;
  double min_pivot_ = INFINITY;
};

} // namespace lkg
