#pragma once

// Experiment configuration: INI-style text with a top-level seed and the
// sections [model], [lattice], [run], [output]. Every key is declared in a
// schema; unknown keys, type errors and cross-field violations are rejected
// with the offending key path.

#include "lkg/lattice.hpp"
#include "lkg/potential.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lkg::config {

enum class Kind {
  Spectrum,
  Rotation,
  Gaps,
  Evolve,
  Decay,
  Strichartz,
  Nonlinear,
  CombesThomas,
  Balakrishnan,
  VdcProbe,
};

const char* to_string(Kind k);
std::optional<Kind> kind_from_string(const std::string& s);
const std::vector<std::string>& kind_names();

/// Initial-data profile; `amplitude` is the l2 norm of the profile.
struct DataProfile {
  std::string shape = "zero";  // zero | delta | gaussian
  double amplitude = 0.0;
  double width = 2.0;          // gaussian standard deviation in sites
};

struct ModelConfig {
  int dimension = 1;
  std::string potential = "zero";  // zero | cosine | fourier
  double lambda = 0.0;
  std::string coefficients;        // fourier: "k1 k2 : re im; ..."
  double radius = 0.5;
  std::vector<double> omega;
  double eta = 1.0;
  int k_max = 10;
  std::vector<double> theta;
  int theta_grid = 0;
  double m = 1.0;
};

struct RunConfig {
  Kind kind = Kind::Spectrum;
  // spectrum
  std::string op = "H";
  bool vectors = false;
  // rotation / gaps
  std::vector<double> energies;
  std::size_t n_iter = 1'000'000;
  double e_min = -3.0, e_max = 3.0, e_step = 5e-3;
  double rho_tol = 1e-3;
  int k_label = 3;
  // evolve / decay / strichartz / nonlinear
  DataProfile phi{"delta", 1.0, 2.0};
  DataProfile psi;
  double t_min = 50.0, t_max = 1500.0;
  std::size_t samples = 240;
  std::string grid = "geometric";  // geometric | linear
  bool lean = true;
  double accept_min = 0.30, accept_max = 0.37;
  double tau = 0.3;
  std::vector<double> q, r;
  std::vector<double> t_values;
  double dt = 0.05;
  double p = 9.0;
  int sign = -1;
  std::size_t record_every = 100;
  std::vector<double> r_list;
  // combes-thomas
  std::vector<double> z;
  int site = 0;
  double calibration = 0.5;
  // balakrishnan
  std::size_t nodes = 128;
  // vdc-probe
  double exponent = 1.0 / 3.0;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  bool has(const std::string& f) const;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  ModelConfig model;
  int half_width = 64;
  std::string boundary = "dirichlet";
  RunConfig run;
  OutputConfig output;

  /// Canonical key/value table: section -> (key -> canonical value). The
  /// top-level seed lives under the empty section name.
  std::map<std::string, std::map<std::string, std::string>> canonical;

  potential::TrigPolynomialPotential potential() const;
  lattice::LatticeWindow window() const { return lattice::LatticeWindow(half_width); }
  /// theta itself when theta_grid is 0, else theta + 2 pi i / theta_grid on
  /// every component, i = 0..theta_grid-1.
  std::vector<std::vector<double>> theta_points() const;
  std::vector<double> data(const DataProfile& prof) const;

  bool operator==(const ExperimentConfig& o) const { return canonical == o.canonical; }
};

/// Parses, applies defaults, canonicalizes and validates. `kind_override`
/// comes from the CLI subcommand; a different [run] kind is an error.
ExperimentConfig parse_config(const std::string& text,
                              std::optional<Kind> kind_override = std::nullopt);

/// Canonical text: sections and keys sorted, numbers in shortest round-trip
/// form. parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& c);

/// SHA-256 of the canonical text.
std::string config_hash(const ExperimentConfig& c);

/// Golden-ratio frequency pi (sqrt 5 - 1).
double golden_omega();

} // namespace lkg::config
