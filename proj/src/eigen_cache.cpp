#include "lkg/error.hpp"
#include "lkg/hash.hpp"
#include "lkg/lattice.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace lkg::lattice {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'K', 'G', '1'};
constexpr std::uint32_t kVersion = 1;

template <class U>
U to_little(U v) {
  if constexpr (std::endian::native == std::endian::big) {
    U r = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) r = (r << 8) | ((v >> (8 * i)) & 0xFF);
    return r;
  }
  return v;
}

struct ByteWriter {
  std::vector<unsigned char> bytes;
  template <class U>
  void put_uint(U v) {
    v = to_little(v);
    unsigned char b[sizeof(U)];
    std::memcpy(b, &v, sizeof(U));
    bytes.insert(bytes.end(), b, b + sizeof(U));
  }
  void put(double x) { put_uint(std::bit_cast<std::uint64_t>(x)); }
  void put(std::int64_t x) { put_uint(static_cast<std::uint64_t>(x)); }
};

void write_f64(std::ofstream& out, std::span<const double> xs) {
  std::vector<std::uint64_t> buf(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) buf[i] = to_little(std::bit_cast<std::uint64_t>(xs[i]));
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
}

void read_f64(std::ifstream& in, std::span<double> xs) {
  std::vector<std::uint64_t> buf(xs.size());
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(std::uint64_t)));
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::bit_cast<double>(to_little(buf[i]));
}

} // namespace

std::string cache_key_hash(const CacheKey& key) {
  ByteWriter w;
  for (char c : std::string_view("LKGKEY1")) w.bytes.push_back(static_cast<unsigned char>(c));
  w.put(static_cast<std::int64_t>(key.V->dimension()));
  w.put(static_cast<std::int64_t>(key.V->terms().size()));
  for (const auto& t : key.V->terms()) {
    for (int k : t.k) w.put(static_cast<std::int64_t>(k));
    w.put(t.v.real());
    w.put(t.v.imag());
  }
  for (double x : key.omega) w.put(x);
  for (double x : key.theta) w.put(x);
  w.put(static_cast<std::int64_t>(key.half_width));
  w.put(static_cast<std::int64_t>(key.tag == OperatorTag::Schrodinger ? 0 : 1));
  w.put(key.mass);
  return sha256_hex(w.bytes);
}

void save_decomposition(const std::filesystem::path& path, const EigenDecomposition& eig) {
  if (!eig.has_vectors()) throw DomainError("only full decompositions are cached");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out.write(kMagic.data(), kMagic.size());
  const std::uint32_t ver = to_little(kVersion);
  const std::uint64_t M = to_little(static_cast<std::uint64_t>(eig.size()));
  out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
  out.write(reinterpret_cast<const char*>(&M), sizeof M);
  write_f64(out, eig.values);
  write_f64(out, eig.vectors.data());
  if (!out) throw Error("io", "short write to " + path.string());
}

EigenDecomposition load_decomposition(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open " + path.string());
  std::array<char, 4> magic{};
  std::uint32_t ver = 0;
  std::uint64_t M = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&ver), sizeof ver);
  in.read(reinterpret_cast<char*>(&M), sizeof M);
  if (!in || magic != kMagic) throw Error("io", path.string() + " is not an LKG1 cache file");
  if (to_little(ver) != kVersion) throw Error("io", path.string() + " has unsupported version");
  M = to_little(M);
  EigenDecomposition eig;
  eig.values.resize(M);
  eig.vectors = DenseMatrix(M, M);
  read_f64(in, eig.values);
  read_f64(in, eig.vectors.data());
  if (!in) throw Error("io", path.string() + " is truncated");
  return eig;
}

EigenDecomposition cached_eigen(const CacheKey& key, const JacobiMatrix& J, Exec exec) {
  const char* dir = std::getenv("LKG_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return eigen(J, true, exec);
  const std::filesystem::path root(dir);
  const auto file = root / (cache_key_hash(key) + ".lkg");
  if (std::filesystem::exists(file)) {
    auto eig = load_decomposition(file);
    if (eig.size() == J.size()) return eig;
  }
  auto eig = eigen(J, true, exec);
  std::filesystem::create_directories(root);
  save_decomposition(file, eig);
  return eig;
}

} // namespace lkg::lattice
