#pragma once

#include <cstddef>
#include <vector>

namespace lkg {

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Built from Boost's Legendre zeros with weights 2 / ((1 - x^2) P_n'(x)^2).
/// Rules are memoized per n; the returned reference stays valid.
const GaussLegendre& gauss_legendre(std::size_t n);

} // namespace lkg
