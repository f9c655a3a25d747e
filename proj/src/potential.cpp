#include "lkg/potential.hpp"
#include "lkg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lkg::potential {

namespace {

std::string index_str(const Index& k) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
  os << ')';
  return os.str();
}

Index negate(const Index& k) {
  Index m(k);
  for (auto& v : m) v = -v;
  return m;
}

int l1(const Index& k) {
  int s = 0;
  for (int v : k) s += std::abs(v);
  return s;
}

} // namespace

TrigPolynomialPotential::TrigPolynomialPotential(int dimension, std::vector<Term> terms,
                                                 double radius)
    : dim_(dimension), radius_(radius), terms_(std::move(terms)) {
  if (dim_ < 1) throw ConfigError("potential dimension must be positive");
  if (!(radius_ >= 0.0)) throw ConfigError("potential radius must be non-negative");
  for (const auto& t : terms_)
    if (t.k.size() != static_cast<std::size_t>(dim_))
      throw ConfigError("coefficient index " + index_str(t.k) + " has wrong dimension");
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.k < b.k; });
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (terms_[i].k == terms_[i - 1].k)
      throw ConfigError("coefficient index " + index_str(terms_[i].k) + " given twice");

  double scale = 0.0;
  for (const auto& t : terms_) scale = std::max(scale, std::abs(t.v));
  const double tol = 1e-14 * std::max(1.0, scale);
  for (const auto& t : terms_) {
    const Index mk = negate(t.k);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mk,
                               [](const Term& a, const Index& k) { return a.k < k; });
    const std::complex<double> partner = (it != terms_.end() && it->k == mk) ? it->v : 0.0;
    if (std::abs(partner - std::conj(t.v)) > tol)
      throw ConfigError("reality condition violated: v" + index_str(mk) + " != conj(v" +
                        index_str(t.k) + ")");
  }
}

TrigPolynomialPotential TrigPolynomialPotential::zero(int dimension, double radius) {
  return {dimension, {}, radius};
}

TrigPolynomialPotential TrigPolynomialPotential::cosine(int dimension, double lambda,
                                                        double radius) {
  std::vector<Term> terms;
  if (lambda != 0.0) {
    for (int i = 0; i < dimension; ++i) {
      Index k(static_cast<std::size_t>(dimension), 0);
      k[static_cast<std::size_t>(i)] = 1;
      terms.push_back({k, lambda});
      k[static_cast<std::size_t>(i)] = -1;
      terms.push_back({k, lambda});
    }
  }
  return {dimension, std::move(terms), radius};
}

bool TrigPolynomialPotential::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.v == 0.0; });
}

std::complex<double> TrigPolynomialPotential::evaluate_complex(
    std::span<const double> theta) const {
  if (theta.size() != static_cast<std::size_t>(dim_))
    throw DimensionError("theta has dimension " + std::to_string(theta.size()) + ", expected " +
                         std::to_string(dim_));
  std::complex<double> acc = 0.0;
  for (const auto& t : terms_) {
    double phase = 0.0;
    for (int i = 0; i < dim_; ++i)
      phase += t.k[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(i)];
    acc += t.v * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

double evaluate(const TrigPolynomialPotential& V, std::span<const double> theta) {
  return V.evaluate_complex(theta).real();
}

double analytic_majorant(const TrigPolynomialPotential& V, double radius) {
  double s = 0.0;
  for (const auto& t : V.terms()) s += std::abs(t.v) * std::exp(radius * l1(t.k));
  return s;
}

double analytic_majorant(const TrigPolynomialPotential& V) {
  return analytic_majorant(V, V.radius());
}

void validate(const FrequencyVector& w) {
  if (w.omega.empty()) throw ConfigError("frequency vector is empty");
  for (double c : w.omega)
    if (!(c > 0.0 && c < 2.0 * std::numbers::pi))
      throw ConfigError("frequency component " + std::to_string(c) + " outside (0, 2pi)");
  const double d = static_cast<double>(w.omega.size());
  if (!(w.eta > d - 1.0)) throw ConfigError("Diophantine exponent eta must exceed d-1");
  if (w.k_max < 1) throw ConfigError("Diophantine cutoff k_max must be >= 1");
}

long double dist_to_pi_lattice(long double x) {
  const long double pi = std::numbers::pi_v<long double>;
  return std::abs(x - pi * std::round(x / pi));
}

long double dot(std::span<const int> k, std::span<const double> omega) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < k.size(); ++i)
    s += static_cast<long double>(k[i]) * static_cast<long double>(omega[i]);
  return s;
}

DiophantineMargin diophantine_margin(const FrequencyVector& w) {
  if (w.k_max < 1) throw DomainError("diophantine_margin requires k_max >= 1");
  const int d = static_cast<int>(w.omega.size());
  DiophantineMargin best{INFINITY, {}};
  for_each_index(d, w.k_max, [&](const Index& k) {
    const int n1 = l1(k);
    if (n1 == 0) return;
    const long double x = dot(k, w.omega);
    long double dist = dist_to_pi_lattice(x);
    // within double rounding of a point of pi Z counts as exact
    long double scale = std::numbers::pi_v<long double>;
    for (std::size_t i = 0; i < k.size(); ++i) scale += std::abs(k[i] * static_cast<long double>(w.omega[i]));
    if (dist <= 4.0L * std::numeric_limits<double>::epsilon() * scale) dist = 0.0L;
    const double g = static_cast<double>(std::pow(static_cast<long double>(n1), w.eta) * dist);
    if (g < best.gamma_eff) best = {g, k};
  });
  if (best.gamma_eff == 0.0)
    throw ResonanceError(best.argmin_k,
                         "rational resonance at k = " + index_str(best.argmin_k));
  return best;
}

KamSchedule::KamSchedule(double eps0, std::size_t depth) : eps0_(eps0) {
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw DomainError("KAM schedule needs eps0 in (0,1)");
  log_eps_.push_back(std::log(eps0));
  extend(depth);
}

void KamSchedule::extend(std::size_t depth) {
  while (log_eps_.size() < depth) log_eps_.push_back((1.0 + sigma) * log_eps_.back());
}

double KamSchedule::eps(std::size_t j) const { return std::exp(log_eps(j)); }

double KamSchedule::N(std::size_t j) const {
  return std::pow(4.0, static_cast<double>(j + 1)) * sigma * std::abs(log_eps(j));
}

double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

int kam_depth(double t, KamSchedule& schedule) {
  if (!(t >= 1.0)) throw DomainError("kam_depth requires t >= 1");
  const double target = -(5.0 / 3.0) * std::log(japanese_bracket(t));
  for (std::size_t J = 1;; ++J) {
    if (J >= schedule.depth()) schedule.extend(2 * schedule.depth());
    if (0.75 * KamSchedule::sigma * schedule.log_eps(J) <= target) return static_cast<int>(J);
  }
}

int kam_depth_formula(double t, double eps0) {
  const double s = KamSchedule::sigma;
  const double arg = (20.0 / (9.0 * s)) * std::log(japanese_bracket(t)) / std::abs(std::log(eps0));
  return static_cast<int>(std::ceil(std::log(arg) / std::log1p(s)));
}

} // namespace lkg::potential
