#pragma once

// Quasi-periodic potentials on the torus T^d, frequency vectors with their
// finite-cutoff Diophantine margin, and the KAM bookkeeping sequences.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lkg::potential {

using Index = std::vector<int>;

/// Finite Fourier series V(theta) = sum_k v_k exp(i <k, theta>) with the
/// reality condition v_{-k} = conj(v_k).
class TrigPolynomialPotential {
public:
  struct Term {
    Index k;
    std::complex<double> v;
  };

  /// Throws ConfigError if a term violates the reality condition, an index has
  /// the wrong dimension, or an index appears twice.
  TrigPolynomialPotential(int dimension, std::vector<Term> terms, double radius);

  static TrigPolynomialPotential zero(int dimension, double radius = 0.5);
  /// V(theta) = 2 lambda sum_i cos(theta_i).
  static TrigPolynomialPotential cosine(int dimension, double lambda, double radius = 0.5);

  int dimension() const { return dim_; }
  double radius() const { return radius_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const;

  /// Full complex sum; the imaginary part is rounding noise.
  std::complex<double> evaluate_complex(std::span<const double> theta) const;

private:
  int dim_;
  double radius_;
  std::vector<Term> terms_;  // sorted lexicographically by k
};

double evaluate(const TrigPolynomialPotential& V, std::span<const double> theta);

/// sum_k |v_k| e^{r |k|_1}, an upper bound for |V|_r.
double analytic_majorant(const TrigPolynomialPotential& V);
double analytic_majorant(const TrigPolynomialPotential& V, double radius);

struct FrequencyVector {
  std::vector<double> omega;
  double eta = 1.0;
  int k_max = 10;
};

/// Validates the component range (0, 2 pi) and eta > d - 1.
void validate(const FrequencyVector& w);

/// dist(x, pi Z) with extended-precision reduction.
long double dist_to_pi_lattice(long double x);

/// <k, omega> accumulated in extended precision.
long double dot(std::span<const int> k, std::span<const double> omega);

struct DiophantineMargin {
  double gamma_eff;
  Index argmin_k;
};

/// min over 0 < |k|_inf <= K_max of |k|_1^eta dist(<k, omega>, pi Z); ties go
/// to the lexicographically smallest k. Throws ResonanceError when an exact
/// resonance lies within the cutoff.
DiophantineMargin diophantine_margin(const FrequencyVector& w);

/// Calls f(k) for every k with |k|_inf <= K in lexicographic order.
template <class F>
void for_each_index(int dimension, int K, F&& f) {
  Index k(static_cast<std::size_t>(dimension), -K);
  for (;;) {
    f(static_cast<const Index&>(k));
    int i = dimension - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == K) {
      k[static_cast<std::size_t>(i)] = -K;
      --i;
    }
    if (i < 0) return;
    ++k[static_cast<std::size_t>(i)];
  }
}

/// epsilon_{j+1} = epsilon_j^{1+sigma}, N_j = 4^{j+1} sigma |ln epsilon_j|.
/// Stored in log space; epsilon_j underflows long before the schedule ends.
class KamSchedule {
public:
  static constexpr double sigma = 1.0 / 200.0;

  explicit KamSchedule(double eps0, std::size_t depth = 64);

  double eps0() const { return eps0_; }
  std::size_t depth() const { return log_eps_.size(); }
  void extend(std::size_t depth);

  double log_eps(std::size_t j) const { return log_eps_.at(j); }
  double eps(std::size_t j) const;
  double N(std::size_t j) const;

private:
  double eps0_;
  std::vector<double> log_eps_;
};

double japanese_bracket(double t);

/// Smallest J >= 1 with eps_J^{3 sigma / 4} <= <t>^{-5/3}, found by scanning
/// the schedule (extended as needed).
int kam_depth(double t, KamSchedule& schedule);

/// Ceiling formula for the same depth; may return values < 1 when eps_1
/// already satisfies the bound.
int kam_depth_formula(double t, double eps0);

} // namespace lkg::potential
