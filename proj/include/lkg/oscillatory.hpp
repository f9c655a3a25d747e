#pragma once

// Free Klein-Gordon dispersion W(rho) = sqrt(2 + m^2 - 2 cos rho), its
// inflection point, and the free propagator kernel as an oscillatory integral.

#include "lkg/exec.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace lkg::oscillatory {

/// W and its first three derivatives in rho; order 1 is the group velocity.
double dispersion(double m, double rho, int order);

/// |W'''(rho)| / |sin rho| in closed form |a^2 - a c + c^2 - 3| / W^5 with
/// a = 2 + m^2, c = cos rho; finite at the endpoints.
double third_derivative_ratio(double m, double rho);

struct CriticalVelocity {
  double v_max;
  double rho_star;
};

/// Root of W'' on (0, pi) by bisection; v_max = W'(rho_star).
CriticalVelocity critical_velocity(double m);

struct DispersionProfile {
  double m;
  double C1;  // min of |W'''| / |sin rho| on the grid
  double C2;  // max of the same ratio
  double rho_star;
  double v_max;

  explicit DispersionProfile(double mass, std::size_t grid = 1000);

  double operator()(double rho, int order = 0) const { return dispersion(m, rho, order); }
};

enum class Kernel { Cos, Sinc };

struct KernelOptions {
  double abs_tol = 1e-9;
  int max_refinements = 4;  // panel doublings allowed beyond the first check
};

struct KernelValue {
  double value;
  double error;  // |Q(P panels) - Q(2P panels)|
};

/// (1/pi) int_0^pi cos(n rho) cos(t W) d rho (Cos) or with sin(t W)/W (Sinc).
/// Panels of width <= 8 pi / (|t| v_max + |n| + 1), 32 Gauss-Legendre nodes
/// each. Throws PrecisionError when abs_tol is not reached.
KernelValue free_kernel(int n, double t, double m, Kernel which, KernelOptions opts = {});

/// K(n, t) for n = 0..n_max with a shared node set; K(-n, t) = K(n, t).
struct KernelRow {
  std::vector<double> values;
  double error;
  std::size_t panels;
};

KernelRow free_kernel_row(int n_max, double t, double m, Kernel which, KernelOptions opts = {},
                          Exec exec = {});

struct VdcRow {
  double t;
  double sup_abs_K;
  double scaled;  // t^exponent * sup_abs_K
  int n_argmax;
  double outside_cone;  // |K(ceil(1.2 v_max t), t)|
};

struct VdcProbe {
  std::vector<VdcRow> rows;
  double exponent;
  double ratio;   // max/min of the scaled column
  double growth;  // last/first of the scaled column
};

/// sup over |n| <= ceil(1.05 v_max t) of |K(n, t)| (Cos kernel), scaled by
/// t^exponent.
VdcProbe vdc_decay_probe(double m, std::span<const double> t_grid, double exponent = 1.0 / 3.0,
                         KernelOptions opts = {}, Exec exec = {});

/// Rescales an existing probe to another exponent without recomputing K.
VdcProbe rescale(const VdcProbe& probe, double exponent);

/// n points geometric on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

} // namespace lkg::oscillatory
