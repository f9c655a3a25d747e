#include "lkg/cocycle.hpp"
#include "lkg/error.hpp"

#include <algorithm>
#include <numbers>

namespace lkg::cocycle {

using std::numbers::pi;

TransferMatrix transfer(double E, const potential::TrigPolynomialPotential& V,
                        std::span<const double> theta) {
  return {potential::evaluate(V, theta) - E, -1.0, 1.0, 0.0};
}

TransferMatrix renormalize(const TransferMatrix& P) {
  const double s = 1.0 / std::sqrt(P.det());
  return {P.a * s, P.b * s, P.c * s, P.d * s};
}

double lift_increment(const TransferMatrix& A, double y0, double y1) {
  const double z0 = A.a * y0 + A.b * y1;
  const double z1 = A.c * y0 + A.d * y1;
  double inc = std::atan2(y0 * z1 - y1 * z0, y0 * z0 + y1 * z1);
  if (inc < -0.5 * pi) inc += 2.0 * pi;
  return inc;
}

CocycleRun run_cocycle(double E, const potential::TrigPolynomialPotential& V,
                       std::span<const double> omega, std::span<const double> theta0,
                       std::size_t n_iter) {
  const std::size_t d = theta0.size();
  if (omega.size() != d || static_cast<std::size_t>(V.dimension()) != d)
    throw DimensionError("cocycle: omega/theta dimension mismatch");
  std::vector<double> point(d);
  const bool free = V.is_zero();
  return iterate_cocycle(n_iter, [&](std::size_t n) {
    if (free) return TransferMatrix{-E, -1.0, 1.0, 0.0};
    for (std::size_t c = 0; c < d; ++c) point[c] = theta0[c] + static_cast<double>(n) * omega[c];
    return transfer(E, V, point);
  });
}

RotationNumber rotation_from_run(const CocycleRun& run) {
  const double n = static_cast<double>(run.n_iter);
  const double rho = std::clamp(run.lift_total / n, 0.0, pi);
  const double half_n = static_cast<double>(run.n_iter / 2);
  const double rho_half = half_n > 0 ? std::clamp(run.lift_half / half_n, 0.0, pi) : rho;
  return {rho, std::abs(rho - rho_half) + pi / n};
}

RotationNumber rotation_number(double E, const potential::TrigPolynomialPotential& V,
                               std::span<const double> omega, std::span<const double> theta0,
                               std::size_t n_iter) {
  if (n_iter < 1000) throw DomainError("rotation_number requires n_iter >= 1000");
  return rotation_from_run(run_cocycle(E, V, omega, theta0, n_iter));
}

double lyapunov(double E, const potential::TrigPolynomialPotential& V,
                std::span<const double> omega, std::span<const double> theta0,
                std::size_t n_iter) {
  if (n_iter < 1000) throw DomainError("lyapunov requires n_iter >= 1000");
  const auto run = run_cocycle(E, V, omega, theta0, n_iter);
  return std::max(0.0, run.log_growth / static_cast<double>(n_iter));
}

GapLabel gap_label(double rho, std::span<const double> omega, int K_label) {
  if (K_label < 1) throw DomainError("gap_label requires K_label >= 1");
  const int d = static_cast<int>(omega.size());
  struct Cand {
    potential::Index k;
    double r;
  };
  std::vector<Cand> all;
  GapLabel out;
  out.residual = INFINITY;
  potential::for_each_index(d, K_label, [&](const potential::Index& k) {
    const long double half = potential::dot(k, omega) / 2.0L;
    const double r = static_cast<double>(potential::dist_to_pi_lattice(rho - half));
    all.push_back({k, r});
    if (r < out.residual) {
      out.residual = r;
      out.k = k;
    }
  });
  const double cut = 2.0 * out.residual + 1e-15;
  for (const auto& c : all)
    if (c.r <= cut) out.candidates.push_back(c.k);
  out.labeled = out.residual <= 1e-2;
  return out;
}

GapScan gap_scan(const potential::TrigPolynomialPotential& V, std::span<const double> omega,
                 const std::vector<std::vector<double>>& theta_grid,
                 const lattice::LatticeWindow& window, std::span<const double> E_grid,
                 GapScanOptions opts, Exec exec) {
  if (theta_grid.empty()) throw DomainError("gap_scan needs at least one theta");
  std::vector<lattice::JacobiMatrix> ops;
  for (const auto& th : theta_grid)
    ops.push_back(lattice::build_operator(V, omega, th, window, lattice::OperatorTag::Schrodinger));

  const auto nE = static_cast<std::ptrdiff_t>(E_grid.size());
  GapScan scan;
  scan.rows.resize(E_grid.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec.parallel)
  for (std::ptrdiff_t i = 0; i < nE; ++i) {
    const double E = E_grid[static_cast<std::size_t>(i)];
    const auto run = run_cocycle(E, V, omega, theta_grid.front(), opts.n_iter);
    const auto rot = rotation_from_run(run);
    std::size_t count = 0;
    for (const auto& J : ops) count += lattice::eigen_count_below(J, E);
    scan.rows[static_cast<std::size_t>(i)] = {
        E, rot.rho, rot.error,
        std::max(0.0, run.log_growth / static_cast<double>(opts.n_iter)), count, false, {}};
  }

  auto flat = [&](std::size_t i) {
    const auto& a = scan.rows[i];
    const auto& b = scan.rows[i + 1];
    return a.count_below == b.count_below && std::abs(a.rho - b.rho) <= opts.rho_tol;
  };
  std::size_t i = 0;
  while (i + 1 < scan.rows.size()) {
    if (!flat(i)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j + 1 < scan.rows.size() && flat(j)) ++j;
    double rho = 0.0;
    for (std::size_t r = i; r <= j; ++r) rho += scan.rows[r].rho;
    rho /= static_cast<double>(j - i + 1);
    Gap g{scan.rows[i].E, scan.rows[j].E, rho, gap_label(rho, omega, opts.k_label)};
    for (std::size_t r = i; r <= j; ++r) {
      scan.rows[r].is_gap = true;
      scan.rows[r].gap_k = g.label.k;
    }
    scan.gaps.push_back(std::move(g));
    i = j + 1;
  }
  return scan;
}

} // namespace lkg::cocycle
