// Serial reference kernels against their OpenMP counterparts.

#include "lkg/kernels.hpp"
#include "lkg/lattice.hpp"
#include "lkg/potential.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

using namespace lkg;

lattice::JacobiMatrix operator_of_size(int N) {
  const auto V = potential::TrigPolynomialPotential::cosine(1, 0.05);
  const std::vector<double> om{std::numbers::pi * (std::sqrt(5.0) - 1.0)}, th{0.0};
  return lattice::build_operator(V, om, th, lattice::LatticeWindow(N),
                                 lattice::OperatorTag::KleinGordon, 1.0);
}

DenseMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  DenseMatrix A(r, c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& x : A.data()) x = u(rng);
  return A;
}

template <bool Parallel>
void BM_eigen(benchmark::State& state) {
  const auto J = operator_of_size(static_cast<int>(state.range(0)));
  const Exec exec{Parallel, true};
  for (auto _ : state) benchmark::DoNotOptimize(lattice::eigen(J, true, exec));
}

template <bool Parallel>
void BM_bisect(benchmark::State& state) {
  const auto J = operator_of_size(static_cast<int>(state.range(0)));
  std::vector<double> out(J.size());
  for (auto _ : state) {
    if (Parallel)
      kernels::omp::bisect_eigenvalues(J.view(), 0, J.size(), 1e-12, out);
    else
      kernels::serial::bisect_eigenvalues(J.view(), 0, J.size(), 1e-12, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto A = random_matrix(n, n, 1), B = random_matrix(n, 64, 2);
  DenseMatrix U(n, 64);
  for (auto _ : state) {
    if (Parallel)
      kernels::omp::gemm(A, B, U);
    else
      kernels::serial::gemm(A, B, U);
    benchmark::DoNotOptimize(U.data().data());
  }
}

template <bool Parallel>
void BM_cosine_sum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> nodes(4096), g(4096), out(n);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = std::numbers::pi * (static_cast<double>(i) + 0.5) / 4096.0;
    g[i] = 1.0 / 4096.0;
  }
  for (auto _ : state) {
    if (Parallel)
      kernels::omp::cosine_sum(nodes, g, out);
    else
      kernels::serial::cosine_sum(nodes, g, out);
    benchmark::DoNotOptimize(out.data());
  }
}

} // namespace

BENCHMARK(BM_eigen<false>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_eigen<true>)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bisect<false>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bisect<true>)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gemm<false>)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gemm<true>)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cosine_sum<false>)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cosine_sum<true>)->Arg(2048)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
