#include "lkg/oscillatory.hpp"
#include "lkg/error.hpp"
#include "lkg/format.hpp"
#include "lkg/kernels.hpp"
#include "lkg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lkg::oscillatory {

using std::numbers::pi;

namespace {

constexpr std::size_t kPanelNodes = 32;

void check_mass(double m) {
  if (!(m > 0.0)) throw DomainError("mass must be positive");
}

/// Nodes and weights (including the 1/pi and the t-dependent factor) of the
/// composite rule with P panels on [0, pi].
void kernel_nodes(double t, double m, Kernel which, std::size_t P, std::vector<double>& rho,
                  std::vector<double>& g) {
  const auto& rule = gauss_legendre(kPanelNodes);
  const double h = pi / static_cast<double>(P);
  rho.resize(P * kPanelNodes);
  g.resize(P * kPanelNodes);
  for (std::size_t p = 0; p < P; ++p) {
    const double mid = (static_cast<double>(p) + 0.5) * h;
    for (std::size_t q = 0; q < kPanelNodes; ++q) {
      const double x = mid + 0.5 * h * rule.nodes[q];
      const double W = dispersion(m, x, 0);
      const double f = which == Kernel::Cos ? std::cos(t * W) : std::sin(t * W) / W;
      rho[p * kPanelNodes + q] = x;
      g[p * kPanelNodes + q] = 0.5 * h * rule.weights[q] * f / pi;
    }
  }
}

std::size_t base_panels(double t, double v_max, double n_abs) {
  const double width = 8.0 * pi / (std::abs(t) * v_max + n_abs + 1.0);
  return static_cast<std::size_t>(std::ceil(pi / width));
}

} // namespace

double dispersion(double m, double rho, int order) {
  check_mass(m);
  const double a = 2.0 + m * m;
  const double c = std::cos(rho), s = std::sin(rho);
  const double W = std::sqrt(a - 2.0 * c);
  switch (order) {
  case 0:
    return W;
  case 1:
    return s / W;
  case 2:
    return c / W - s * s / (W * W * W);
  case 3: {
    const double W3 = W * W * W;
    return -s / W - 3.0 * c * s / W3 + 3.0 * s * s * s / (W3 * W * W);
  }
  default:
    throw DomainError("dispersion order must be 0, 1, 2 or 3");
  }
}

double third_derivative_ratio(double m, double rho) {
  check_mass(m);
  const double a = 2.0 + m * m;
  const double c = std::cos(rho);
  const double W = std::sqrt(a - 2.0 * c);
  return std::abs(a * a - a * c + c * c - 3.0) / std::pow(W, 5);
}

CriticalVelocity critical_velocity(double m) {
  check_mass(m);
  double lo = 0.0, hi = pi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dispersion(m, mid, 2) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double rho = 0.5 * (lo + hi);
  return {dispersion(m, rho, 1), rho};
}

DispersionProfile::DispersionProfile(double mass, std::size_t grid) : m(mass) {
  check_mass(mass);
  if (grid < 2) throw DomainError("profile grid needs at least two points");
  C1 = INFINITY;
  C2 = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double r = third_derivative_ratio(m, pi * static_cast<double>(i) /
                                                   static_cast<double>(grid - 1));
    C1 = std::min(C1, r);
    C2 = std::max(C2, r);
  }
  const auto cv = critical_velocity(m);
  rho_star = cv.rho_star;
  v_max = cv.v_max;
}

KernelValue free_kernel(int n, double t, double m, Kernel which, KernelOptions opts) {
  check_mass(m);
  const double v_max = critical_velocity(m).v_max;
  std::size_t P = base_panels(t, v_max, std::abs(static_cast<double>(n)));
  std::vector<double> rho, g;
  const auto nn = static_cast<std::size_t>(std::abs(n));
  kernel_nodes(t, m, which, P, rho, g);
  double coarse = kernels::detail::cosine_sum_one(rho, g, nn);
  double err = INFINITY;
  for (int r = 0; r <= opts.max_refinements; ++r) {
    P *= 2;
    kernel_nodes(t, m, which, P, rho, g);
    const double fine = kernels::detail::cosine_sum_one(rho, g, nn);
    err = std::abs(fine - coarse);
    coarse = fine;
    if (err <= opts.abs_tol) return {fine, err};
  }
  throw PrecisionError(err, "free_kernel(n=" + std::to_string(n) + ", t=" + num(t) +
                                ") missed the tolerance at the panel budget");
}

KernelRow free_kernel_row(int n_max, double t, double m, Kernel which, KernelOptions opts,
                          Exec exec) {
  check_mass(m);
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  const double v_max = critical_velocity(m).v_max;
  std::size_t P = base_panels(t, v_max, static_cast<double>(n_max));
  const auto len = static_cast<std::size_t>(n_max) + 1;
  std::vector<double> rho, g, coarse(len), fine(len);
  kernel_nodes(t, m, which, P, rho, g);
  kernels::cosine_sum(rho, g, coarse, exec);
  double err = INFINITY;
  for (int r = 0; r <= opts.max_refinements; ++r) {
    P *= 2;
    kernel_nodes(t, m, which, P, rho, g);
    kernels::cosine_sum(rho, g, fine, exec);
    err = 0.0;
    for (std::size_t i = 0; i < len; ++i) err = std::max(err, std::abs(fine[i] - coarse[i]));
    if (err <= opts.abs_tol) return {fine, err, P};
    std::swap(coarse, fine);
  }
  throw PrecisionError(err, "free_kernel_row(t=" + num(t) +
                                ") missed the tolerance at the panel budget");
}

VdcProbe vdc_decay_probe(double m, std::span<const double> t_grid, double exponent,
                         KernelOptions opts, Exec exec) {
  if (t_grid.size() < 8) throw DomainError("vdc_decay_probe needs at least 8 times");
  const double v_max = critical_velocity(m).v_max;
  VdcProbe probe;
  probe.exponent = exponent;
  for (double t : t_grid) {
    const int n_cone = static_cast<int>(std::ceil(1.05 * v_max * t));
    const int n_out = static_cast<int>(std::ceil(1.2 * v_max * t));
    const auto row = free_kernel_row(n_out, t, m, Kernel::Cos, opts, exec);
    VdcRow out{t, 0.0, 0.0, 0, std::abs(row.values[static_cast<std::size_t>(n_out)])};
    for (int n = 0; n <= n_cone; ++n) {
      const double a = std::abs(row.values[static_cast<std::size_t>(n)]);
      if (a > out.sup_abs_K) {
        out.sup_abs_K = a;
        out.n_argmax = n;
      }
    }
    probe.rows.push_back(out);
  }
  return rescale(probe, exponent);
}

VdcProbe rescale(const VdcProbe& probe, double exponent) {
  VdcProbe out = probe;
  out.exponent = exponent;
  double lo = INFINITY, hi = 0.0;
  for (auto& r : out.rows) {
    r.scaled = std::pow(r.t, exponent) * r.sup_abs_K;
    lo = std::min(lo, r.scaled);
    hi = std::max(hi, r.scaled);
  }
  out.ratio = hi / lo;
  out.growth = out.rows.back().scaled / out.rows.front().scaled;
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("geometric grid needs 0 < lo < hi, n >= 2");
  std::vector<double> t(n);
  const double q = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = lo * std::exp(q * static_cast<double>(i));
  t.back() = hi;
  return t;
}

} // namespace lkg::oscillatory
