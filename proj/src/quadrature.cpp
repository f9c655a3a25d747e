#include "lkg/quadrature.hpp"
#include "lkg/error.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <map>
#include <memory>
#include <mutex>

namespace lkg {

namespace {

GaussLegendre make_rule(std::size_t n) {
  const int order = static_cast<int>(n);
  const auto zeros = boost::math::legendre_p_zeros<double>(order);  // non-negative half
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  auto weight = [&](double x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    return 2.0 / ((1.0 - x * x) * dp * dp);
  };
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    const double x = zeros[i];
    const double w = weight(x);
    if (n % 2 == 1 && i == 0) {
      rule.nodes[half] = 0.0;
      rule.weights[half] = w;
      continue;
    }
    const std::size_t off = n % 2 == 1 ? i : i + 1;  // distance from the middle
    rule.nodes[half + (n % 2 == 1 ? off : off - 1)] = x;
    rule.weights[half + (n % 2 == 1 ? off : off - 1)] = w;
    rule.nodes[half - off] = -x;
    rule.weights[half - off] = w;
  }
  return rule;
}

} // namespace

const GaussLegendre& gauss_legendre(std::size_t n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> rules;
  std::lock_guard lock(mu);
  auto& slot = rules[n];
  if (!slot) slot = std::make_unique<GaussLegendre>(make_rule(n));
  return *slot;
}

} // namespace lkg
