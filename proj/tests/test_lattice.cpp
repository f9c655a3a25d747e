#include "lkg/error.hpp"
#include "lkg/lattice.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <unistd.h>

using namespace lkg;
using namespace lkg::lattice;
using Potential = potential::TrigPolynomialPotential;

namespace {

const std::vector<double> kOmega{std::numbers::pi * (std::sqrt(5.0) - 1.0)};

JacobiMatrix op(const Potential& V, int N, OperatorTag tag, double theta = 0.0, double m = 0.0) {
  const std::vector<double> th{theta};
  return build_operator(V, kOmega, th, LatticeWindow(N), tag, m);
}

Potential fourier() {
  using Term = Potential::Term;
  return Potential(1, {Term{{1}, {0.2, 0.1}}, Term{{-1}, {0.2, -0.1}}, Term{{3}, {0.0, 0.15}},
                       Term{{-3}, {0.0, -0.15}}},
                   0.5);
}

} // namespace

TEST_CASE("window indexing") {
  LatticeWindow w(3);
  CHECK(w.size() == 7);
  CHECK(w.site(0) == -3);
  CHECK(w.offset(0) == 3);
  CHECK(w.offset(-3) == 0);
}

TEST_CASE("free M = 3 spectrum is -sqrt2, 0, sqrt2") {
  const auto J = op(Potential::zero(1), 1, OperatorTag::Schrodinger);
  const auto e = eigen(J, true);
  REQUIRE(e.size() == 3);
  CHECK(e.values[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-11));
  CHECK(std::abs(e.values[1]) < 1e-11);
  CHECK(e.values[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
}

TEST_CASE("operator entries") {
  const auto V = Potential::cosine(1, 0.1);
  const auto H = op(V, 4, OperatorTag::Schrodinger, 0.3);
  const auto T = op(V, 4, OperatorTag::KleinGordon, 0.3, 1.5);
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double n = static_cast<double>(i) - 4.0;
    CHECK(H.diag[i] == doctest::Approx(0.2 * std::cos(0.3 + n * kOmega[0])).epsilon(1e-13));
    CHECK(T.diag[i] == doctest::Approx(H.diag[i] + 2.0 + 2.25).epsilon(1e-13));
  }
  for (double o : H.off) CHECK(o == -1.0);
  CHECK_THROWS_AS(op(V, 4, OperatorTag::KleinGordon, 0.0, 0.0), DomainError);
}

TEST_CASE("eigenvalues match the dense Jacobi oracle") {
  for (const auto& V : {Potential::cosine(1, 0.3), fourier()}) {
    const auto J = op(V, 20, OperatorTag::Schrodinger, 0.7);
    const auto e = eigen(J, true);
    const auto ref = oracle::jacobi_eigen(oracle::dense(J));
    for (std::size_t j = 0; j < e.size(); ++j) CHECK(std::abs(e.values[j] - ref.values[j]) < 1e-10);
  }
}

TEST_CASE("eigenvectors are orthonormal with small residuals") {
  const auto J = op(Potential::cosine(1, 0.05), 150, OperatorTag::KleinGordon, 0.0, 1.0);
  const auto e = eigen(J, true);
  const std::size_t M = e.size();
  double res = 0.0, orth = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    const auto q = e.vectors.col(j);
    const auto Jq = apply(J, q);
    for (std::size_t i = 0; i < M; ++i) res = std::max(res, std::abs(Jq[i] - e.values[j] * q[i]));
    for (std::size_t k = j; k < M; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < M; ++i) s += q[i] * e.vectors(i, k);
      orth = std::max(orth, std::abs(s - (j == k ? 1.0 : 0.0)));
    }
  }
  CHECK(res < 1e-10);
  CHECK(orth < 1e-10);
}

TEST_CASE("near-degenerate eigenvalues keep orthogonal vectors") {
  // two decoupled blocks with identical spectra
  JacobiMatrix J;
  J.diag = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  J.off = {-1.0, -1.0, -1e-14, -1.0, -1.0};
  const auto e = eigen(J, true);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = a + 1; b < 6; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < 6; ++i) s += e.vectors(i, a) * e.vectors(i, b);
      CHECK(std::abs(s) < 1e-10);
    }
}

TEST_CASE("Sturm counts and k-th eigenvalue agree with the oracle") {
  const auto J = op(fourier(), 15, OperatorTag::Schrodinger, 1.1);
  const auto ref = oracle::jacobi_eigen(oracle::dense(J));
  for (double E : {-3.0, -1.2, -0.1, 0.4, 1.9, 3.0}) {
    const auto expect = static_cast<std::size_t>(
        std::count_if(ref.values.begin(), ref.values.end(), [&](double x) { return x < E; }));
    CHECK(eigen_count_below(J, E) == expect);
  }
  for (std::size_t k : {0u, 7u, 30u}) CHECK(std::abs(kth_eigenvalue(J, k) - ref.values[k]) < 1e-12);
}

TEST_CASE("serial and parallel eigensolvers agree bit for bit") {
  const auto J = op(Potential::cosine(1, 0.05), 200, OperatorTag::KleinGordon, 0.2, 1.0);
  const auto a = eigen(J, true, Exec::serial());
  const auto b = eigen(J, true, Exec{true, true});
  CHECK(a.values == b.values);
  CHECK(std::ranges::equal(a.vectors.data(), b.vectors.data()));
}

TEST_CASE("values-only run returns the same eigenvalues") {
  const auto J = op(Potential::cosine(1, 0.2), 60, OperatorTag::Schrodinger);
  CHECK(eigen(J, false).values == eigen(J, true).values);
  CHECK_FALSE(eigen(J, false).has_vectors());
}

TEST_CASE("cache file round trip and LKG1 header") {
  const auto dir = std::filesystem::temp_directory_path() / ("lkg-cache-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto J = op(Potential::cosine(1, 0.1), 10, OperatorTag::KleinGordon, 0.0, 1.0);
  const auto e = eigen(J, true);
  const auto file = dir / "x.lkg";
  save_decomposition(file, e);
  const auto back = load_decomposition(file);
  CHECK(back.values == e.values);
  CHECK(std::ranges::equal(back.vectors.data(), e.vectors.data()));

  std::ifstream in(file, std::ios::binary);
  char magic[4];
  std::uint32_t ver = 0;
  std::uint64_t M = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&ver), 4);
  in.read(reinterpret_cast<char*>(&M), 8);
  CHECK(std::string(magic, 4) == "LKG1");
  CHECK(M == 21);
  CHECK(std::filesystem::file_size(file) == 16 + 8 * (21 + 21 * 21));

  std::ofstream(dir / "bad.lkg") << "nope";
  CHECK_THROWS_AS(load_decomposition(dir / "bad.lkg"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cached_eigen reuses the file under LKG_CACHE_DIR") {
  const auto dir = std::filesystem::temp_directory_path() / ("lkg-cache-env-" + std::to_string(::getpid()));
  ::setenv("LKG_CACHE_DIR", dir.c_str(), 1);
  const auto V = Potential::cosine(1, 0.1);
  const std::vector<double> th{0.0};
  const auto J = op(V, 12, OperatorTag::KleinGordon, 0.0, 1.0);
  const CacheKey key{&V, kOmega, th, 12, OperatorTag::KleinGordon, 1.0};
  const auto a = cached_eigen(key, J);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& f : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  const auto b = cached_eigen(key, J);
  CHECK(a.values == b.values);
  const CacheKey other{&V, kOmega, th, 12, OperatorTag::KleinGordon, 1.5};
  CHECK(cache_key_hash(key) != cache_key_hash(other));
  ::unsetenv("LKG_CACHE_DIR");
  std::filesystem::remove_all(dir);
}

TEST_CASE("dimension checks") {
  const auto V = Potential::cosine(2, 0.1);
  const std::vector<double> om{1.0}, th{0.0};
  CHECK_THROWS_AS(build_operator(V, om, th, LatticeWindow(3), OperatorTag::Schrodinger), DimensionError);
  const auto J = op(Potential::zero(1), 3, OperatorTag::Schrodinger);
  const std::vector<double> x(5, 1.0);
  CHECK_THROWS_AS(lattice::apply(J, x), DimensionError);
}
