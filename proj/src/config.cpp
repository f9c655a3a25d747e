#include "lkg/config.hpp"
#include "lkg/dynamics.hpp"
#include "lkg/error.hpp"
#include "lkg/format.hpp"
#include "lkg/hash.hpp"
#include "lkg/oscillatory.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace lkg::config {

using std::numbers::pi;

namespace {

constexpr Kind kAllKinds[] = {Kind::Spectrum, Kind::Rotation,   Kind::Gaps,
                              Kind::Evolve,   Kind::Decay,      Kind::Strichartz,
                              Kind::Nonlinear, Kind::CombesThomas, Kind::Balakrishnan,
                              Kind::VdcProbe};

enum class Type { Int, UInt, U64, Real, RealList, Bool, Choice, ChoiceList, Text, Coeffs };

struct KeySpec {
  std::string section;
  std::string key;
  Type type;
  std::optional<std::string> def;  // nullopt: required (or derived, see below)
  std::vector<Kind> kinds;         // empty: every kind
  std::vector<std::string> choices = {};
};

const std::vector<Kind> kData{Kind::Evolve, Kind::Decay, Kind::Strichartz};
const std::vector<Kind> kNl{Kind::Nonlinear};

std::vector<KeySpec> build_schema() {
  std::vector<KeySpec> s = {
      {"", "seed", Type::U64, std::nullopt, {}},
      {"model", "dimension", Type::Int, "1", {}},
      {"model", "potential", Type::Choice, "zero", {}, {"zero", "cosine", "fourier"}},
      {"model", "lambda", Type::Real, "0", {}},
      {"model", "coefficients", Type::Coeffs, "", {}},
      {"model", "radius", Type::Real, "0.5", {}},
      {"model", "omega", Type::RealList, std::nullopt, {}},
      {"model", "eta", Type::Real, std::nullopt, {}},
      {"model", "k_max", Type::Int, "10", {}},
      {"model", "theta", Type::RealList, std::nullopt, {}},
      {"model", "theta_grid", Type::Int, "0", {}},
      {"model", "m", Type::Real, "1", {}},
      {"lattice", "half_width", Type::Int, "64", {}},
      {"lattice", "boundary", Type::Choice, "dirichlet", {}, {"dirichlet"}},
      {"output", "dir", Type::Text, "out", {}},
      {"output", "formats", Type::ChoiceList, "csv json", {}, {"csv", "json", "bin"}},
      {"run", "kind", Type::Choice, std::nullopt, {}, kind_names()},

      {"run", "op", Type::Choice, "H", {Kind::Spectrum}, {"H", "T"}},
      {"run", "vectors", Type::Bool, "false", {Kind::Spectrum}},

      {"run", "energies", Type::RealList, std::nullopt, {Kind::Rotation}},
      {"run", "n_iter", Type::UInt, "1000000", {Kind::Rotation}},
      {"run", "n_iter", Type::UInt, "100000", {Kind::Gaps}},
      {"run", "e_min", Type::Real, "-3", {Kind::Gaps}},
      {"run", "e_max", Type::Real, "3", {Kind::Gaps}},
      {"run", "e_step", Type::Real, "0.005", {Kind::Gaps}},
      {"run", "rho_tol", Type::Real, "0.001", {Kind::Gaps}},
      {"run", "k_label", Type::Int, "3", {Kind::Gaps}},

      {"run", "t_min", Type::Real, "0", {Kind::Evolve}},
      {"run", "t_max", Type::Real, "100", {Kind::Evolve}},
      {"run", "samples", Type::UInt, "201", {Kind::Evolve}},
      {"run", "grid", Type::Choice, "linear", {Kind::Evolve}, {"linear", "geometric"}},
      {"run", "lean", Type::Bool, "true", {Kind::Evolve}},
      {"run", "t_min", Type::Real, "50", {Kind::Decay}},
      {"run", "t_max", Type::Real, "1500", {Kind::Decay}},
      {"run", "samples", Type::UInt, "240", {Kind::Decay}},
      {"run", "accept_min", Type::Real, "0.3", {Kind::Decay}},
      {"run", "accept_max", Type::Real, "0.37", {Kind::Decay}},
      {"run", "tau", Type::Real, "0.3", {Kind::Strichartz}},
      {"run", "q", Type::RealList, "inf 10", {Kind::Strichartz}},
      {"run", "r", Type::RealList, "2 6", {Kind::Strichartz}},
      {"run", "t_values", Type::RealList, "100 400", {Kind::Strichartz}},
      {"run", "dt", Type::Real, "0.05", {Kind::Strichartz}},

      {"run", "phi", Type::Choice, "delta", kData, {"zero", "delta", "gaussian"}},
      {"run", "phi_amplitude", Type::Real, "1", kData},
      {"run", "phi_width", Type::Real, "2", kData},
      {"run", "psi", Type::Choice, "zero", kData, {"zero", "delta", "gaussian"}},
      {"run", "psi_amplitude", Type::Real, "0", kData},
      {"run", "psi_width", Type::Real, "2", kData},
      {"run", "phi", Type::Choice, "delta", kNl, {"zero", "delta", "gaussian"}},
      {"run", "phi_amplitude", Type::Real, "0.05", kNl},
      {"run", "phi_width", Type::Real, "2", kNl},
      {"run", "psi", Type::Choice, "delta", kNl, {"zero", "delta", "gaussian"}},
      {"run", "psi_amplitude", Type::Real, "0.05", kNl},
      {"run", "psi_width", Type::Real, "2", kNl},
      {"run", "p", Type::Real, "9", kNl},
      {"run", "sign", Type::Int, "-1", kNl},
      {"run", "dt", Type::Real, "0.01", kNl},
      {"run", "t_max", Type::Real, "200", kNl},
      {"run", "record_every", Type::UInt, "50", kNl},
      {"run", "r_list", Type::RealList, "4 6 inf", kNl},

      {"run", "z", Type::RealList, "-1", {Kind::CombesThomas}},
      {"run", "site", Type::Int, "0", {Kind::CombesThomas}},
      {"run", "calibration", Type::Real, "0.5", {Kind::CombesThomas}},
      {"run", "nodes", Type::UInt, "128", {Kind::Balakrishnan}},
      {"run", "t_min", Type::Real, "100", {Kind::VdcProbe}},
      {"run", "t_max", Type::Real, "10000", {Kind::VdcProbe}},
      {"run", "samples", Type::UInt, "12", {Kind::VdcProbe}},
      {"run", "exponent", Type::Real, num(1.0 / 3.0), {Kind::VdcProbe}},
  };
  return s;
}

const std::vector<KeySpec>& schema() {
  static const auto s = build_schema();
  return s;
}

bool applies(const KeySpec& k, Kind kind) {
  return k.kinds.empty() || std::find(k.kinds.begin(), k.kinds.end(), kind) != k.kinds.end();
}

std::string path(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "+inf" || t == "infinity") return INFINITY;
  if (t == "-inf" || t == "-infinity") return -INFINITY;
  double x = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (!t.empty() && *b == '+') ++b;
  const auto res = std::from_chars(b, e, x);
  if (t.empty() || res.ec != std::errc() || res.ptr != e || std::isnan(x))
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  long long x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  std::uint64_t x = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(key + ": expected an unsigned 64-bit integer, got '" + v + "'");
  return x;
}

std::string real_text(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return num(x);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& tok : split_ws(v)) out.push_back(parse_real(key, tok));
  return out;
}

std::vector<potential::TrigPolynomialPotential::Term> parse_coeffs(const std::string& key,
                                                                   const std::string& v) {
  std::vector<potential::TrigPolynomialPotential::Term> terms;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError(key + ": term '" + item + "' must read 'k1 ... kd : re im'");
    potential::TrigPolynomialPotential::Term t;
    for (const auto& tok : split_ws(item.substr(0, colon)))
      t.k.push_back(static_cast<int>(parse_int(key, tok)));
    const auto vals = parse_list(key, item.substr(colon + 1));
    if (vals.size() != 2) throw ConfigError(key + ": term '" + item + "' needs 're im'");
    t.v = {vals[0], vals[1]};
    terms.push_back(std::move(t));
  }
  return terms;
}

std::string canonical_value(const KeySpec& spec, const std::string& raw) {
  const std::string key = path(spec.section, spec.key);
  const std::string v = trim(raw);
  switch (spec.type) {
  case Type::Int:
    return std::to_string(parse_int(key, v));
  case Type::UInt: {
    const auto x = parse_int(key, v);
    if (x < 0) throw ConfigError(key + ": must be non-negative");
    return std::to_string(x);
  }
  case Type::U64:
    return std::to_string(parse_u64(key, v));
  case Type::Real:
    return real_text(parse_real(key, v));
  case Type::RealList: {
    std::string out;
    for (double x : parse_list(key, v)) out += (out.empty() ? "" : " ") + real_text(x);
    return out;
  }
  case Type::Bool:
    if (v == "true" || v == "1" || v == "yes") return "true";
    if (v == "false" || v == "0" || v == "no") return "false";
    throw ConfigError(key + ": expected true or false, got '" + raw + "'");
  case Type::Choice:
    if (std::find(spec.choices.begin(), spec.choices.end(), v) == spec.choices.end()) {
      std::string allowed;
      for (const auto& c : spec.choices) allowed += (allowed.empty() ? "" : " | ") + c;
      throw ConfigError(key + ": '" + v + "' is not one of " + allowed);
    }
    return v;
  case Type::ChoiceList: {
    std::set<std::string> seen;
    for (const auto& tok : split_ws(v)) {
      if (std::find(spec.choices.begin(), spec.choices.end(), tok) == spec.choices.end())
        throw ConfigError(key + ": unknown entry '" + tok + "'");
      seen.insert(tok);
    }
    std::string out;
    for (const auto& s : seen) out += (out.empty() ? "" : " ") + s;
    return out;
  }
  case Type::Text:
    return v;
  case Type::Coeffs: {
    auto terms = parse_coeffs(key, v);
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    std::string out;
    for (const auto& t : terms) {
      std::string item;
      for (int k : t.k) item += std::to_string(k) + " ";
      item += ": " + real_text(t.v.real()) + " " + real_text(t.v.imag());
      out += (out.empty() ? "" : "; ") + item;
    }
    return out;
  }
  }
  return v;
}

const KeySpec* find_spec(const std::string& section, const std::string& key, Kind kind) {
  for (const auto& s : schema())
    if (s.section == section && s.key == key && applies(s, kind)) return &s;
  return nullptr;
}

bool known_anywhere(const std::string& section, const std::string& key) {
  for (const auto& s : schema())
    if (s.section == section && s.key == key) return true;
  return false;
}

DataProfile read_profile(const std::map<std::string, std::string>& run, const std::string& name) {
  DataProfile p;
  p.shape = run.at(name);
  p.amplitude = parse_real("run." + name + "_amplitude", run.at(name + "_amplitude"));
  p.width = parse_real("run." + name + "_width", run.at(name + "_width"));
  if (p.amplitude < 0.0) throw ConfigError("run." + name + "_amplitude must be non-negative");
  if (!(p.width > 0.0)) throw ConfigError("run." + name + "_width must be positive");
  return p;
}

int profile_support(const DataProfile& p) {
  if (p.shape == "zero" || p.amplitude == 0.0) return 0;
  if (p.shape == "delta") return 0;
  return static_cast<int>(std::ceil(4.0 * p.width));
}

bool uses_T(const ExperimentConfig& c) {
  switch (c.run.kind) {
  case Kind::Spectrum:
    return c.run.op == "T";
  case Kind::Rotation:
  case Kind::Gaps:
    return false;
  default:
    return true;
  }
}

void validate(ExperimentConfig& c) {
  const auto& md = c.model;
  const auto d = static_cast<std::size_t>(md.dimension);
  if (md.dimension < 1) throw ConfigError("model.dimension must be >= 1");
  if (md.omega.size() != d)
    throw ConfigError("model.omega has " + std::to_string(md.omega.size()) +
                      " components, model.dimension is " + std::to_string(d));
  if (md.theta.size() != d)
    throw ConfigError("model.theta has " + std::to_string(md.theta.size()) +
                      " components, model.dimension is " + std::to_string(d));
  if (md.theta_grid < 0) throw ConfigError("model.theta_grid must be >= 0");
  if (md.k_max < 1) throw ConfigError("model.k_max must be >= 1");
  if (!(md.radius > 0.0)) throw ConfigError("model.radius must be positive");
  try {
    potential::FrequencyVector fv{md.omega, md.eta, md.k_max};
    potential::validate(fv);
    (void)potential::diophantine_margin(fv);
  } catch (const ResonanceError& e) {
    std::string k;
    for (int x : e.k) k += (k.empty() ? "" : " ") + std::to_string(x);
    throw ConfigError("model.omega: exact resonance <k, omega> in pi Z at k = (" + k + ")");
  } catch (const Error& e) {
    throw ConfigError(std::string("model.omega / model.eta: ") + e.what());
  }
  if (md.potential == "fourier" && trim(md.coefficients).empty())
    throw ConfigError("model.coefficients is required for potential = fourier");
  try {
    (void)c.potential();
  } catch (const Error& e) {
    throw ConfigError(std::string("model.coefficients: ") + e.what());
  }
  if (c.half_width < 1) throw ConfigError("lattice.half_width must be >= 1");
  if (c.output.formats.empty()) throw ConfigError("output.formats must list at least one format");

  auto& r = c.run;
  const bool T = uses_T(c);
  if (T && !(md.m > 0.0))
    throw ConfigError("model.m must be positive for the Klein-Gordon operator (m = 0 is excluded)");

  if (T) {
    const auto V = c.potential();
    for (const auto& th : c.theta_points()) {
      const auto J = lattice::build_operator(V, md.omega, th, c.window(),
                                             lattice::OperatorTag::KleinGordon, md.m);
      if (lattice::eigen_count_below(J, 0.0) > 0)
        throw ConfigError("model.m: T = G + m^2 is not positive definite for this potential; "
                          "increase model.m or reduce model.lambda");
    }
  }

  auto cone = [&](double t_end, const char* time_key) {
    const int support = std::max(profile_support(r.phi), profile_support(r.psi));
    const double v = oscillatory::critical_velocity(md.m).v_max;
    const double need = support + 1.05 * v * t_end + 10.0;
    if (static_cast<double>(c.half_width) < need)
      throw ConfigError("lattice.half_width = " + std::to_string(c.half_width) +
                        " violates the light cone for " + time_key + " = " + real_text(t_end) +
                        " (need >= " + num(std::ceil(need)) + ")");
    if (profile_support(r.phi) > c.half_width || profile_support(r.psi) > c.half_width)
      throw ConfigError("lattice.half_width: initial data do not fit in the window");
  };

  switch (r.kind) {
  case Kind::Spectrum:
    break;
  case Kind::Rotation:
    if (r.energies.empty()) throw ConfigError("run.energies must list at least one energy");
    if (r.n_iter < 1000) throw ConfigError("run.n_iter must be >= 1000");
    break;
  case Kind::Gaps:
    if (!(r.e_max > r.e_min)) throw ConfigError("run.e_max must exceed run.e_min");
    if (!(r.e_step > 0.0)) throw ConfigError("run.e_step must be positive");
    if ((r.e_max - r.e_min) / r.e_step > 1e6) throw ConfigError("run.e_step: more than 1e6 energies");
    if (r.n_iter < 1000) throw ConfigError("run.n_iter must be >= 1000");
    if (r.k_label < 1) throw ConfigError("run.k_label must be >= 1");
    break;
  case Kind::Evolve:
    if (r.t_min < 0.0 || !(r.t_max > r.t_min)) throw ConfigError("run.t_min / run.t_max: need 0 <= t_min < t_max");
    if (r.grid == "geometric" && !(r.t_min > 0.0)) throw ConfigError("run.t_min must be positive for a geometric grid");
    if (r.samples < 2) throw ConfigError("run.samples must be >= 2");
    cone(r.t_max, "run.t_max");
    break;
  case Kind::Decay:
    if (!(r.t_min > 0.0) || !(r.t_max > r.t_min)) throw ConfigError("run.t_min / run.t_max: need 0 < t_min < t_max");
    if (r.t_max < 100.0) throw ConfigError("run.t_max must be >= 100 for a decay fit");
    if (r.samples < 200) throw ConfigError("run.samples must be >= 200 for a decay fit");
    cone(r.t_max, "run.t_max");
    break;
  case Kind::Strichartz: {
    if (!(r.tau > 0.0 && r.tau < 1.0 / 3.0)) throw ConfigError("run.tau must lie in (0, 1/3)");
    if (r.q.size() != r.r.size())
      throw ConfigError("run.q, run.r: lists differ in length (" + std::to_string(r.q.size()) +
                        " vs " + std::to_string(r.r.size()) + ")");
    for (std::size_t i = 0; i < r.q.size(); ++i)
      if (!dynamics::is_admissible(r.tau, r.q[i], r.r[i]))
        throw ConfigError("run.q, run.r: (q, r) = (" + real_text(r.q[i]) + ", " +
                          real_text(r.r[i]) + ") is not tau-admissible for run.tau = " +
                          real_text(r.tau) + " (need 2/q = tau (1 - 2/r))");
    if (r.t_values.empty()) throw ConfigError("run.t_values must list at least one time");
    for (double t : r.t_values)
      if (!(t > 0.0)) throw ConfigError("run.t_values must be positive");
    if (!(r.dt > 0.0)) throw ConfigError("run.dt must be positive");
    cone(*std::max_element(r.t_values.begin(), r.t_values.end()), "max(run.t_values)");
    break;
  }
  case Kind::Nonlinear: {
    if (!(r.p > 1.0)) throw ConfigError("run.p must exceed 1");
    if (r.sign != 1 && r.sign != -1) throw ConfigError("run.sign must be +1 or -1");
    if (!(r.t_max > 0.0)) throw ConfigError("run.t_max must be positive");
    if (r.record_every == 0) throw ConfigError("run.record_every must be positive");
    double mu_max = 0.0;
    const auto V = c.potential();
    for (const auto& th : c.theta_points()) {
      const auto J = lattice::build_operator(V, md.omega, th, c.window(),
                                             lattice::OperatorTag::KleinGordon, md.m);
      mu_max = std::max(mu_max, lattice::kth_eigenvalue(J, J.size() - 1));
    }
    if (!(r.dt > 0.0) || r.dt > 0.1 / std::sqrt(mu_max))
      throw ConfigError("run.dt must lie in (0, 0.1/sqrt(mu_M)] = (0, " +
                        num(0.1 / std::sqrt(mu_max)) + "]");
    for (double x : r.r_list)
      if (!(x > 2.0)) throw ConfigError("run.r_list entries must exceed 2");
    cone(r.t_max, "run.t_max");
    break;
  }
  case Kind::CombesThomas:
    if (r.z.empty()) throw ConfigError("run.z must list at least one shift");
    if (std::abs(r.site) > c.half_width) throw ConfigError("run.site lies outside the window");
    if (!(r.calibration > 0.0)) throw ConfigError("run.calibration must be positive");
    break;
  case Kind::Balakrishnan:
    if (r.nodes < 8) throw ConfigError("run.nodes must be >= 8");
    if (c.window().size() > 512) throw ConfigError("lattice.half_width: dense T^{-1/2} is limited to M <= 512");
    break;
  case Kind::VdcProbe:
    if (md.potential != "zero")
      throw ConfigError("model.potential: vdc-probe evaluates the free kernel and needs potential = zero");
    if (!(r.t_min > 0.0) || !(r.t_max > r.t_min)) throw ConfigError("run.t_min / run.t_max: need 0 < t_min < t_max");
    if (r.samples < 8) throw ConfigError("run.samples must be >= 8");
    break;
  }
}

} // namespace

const char* to_string(Kind k) {
  switch (k) {
  case Kind::Spectrum: return "spectrum";
  case Kind::Rotation: return "rotation";
  case Kind::Gaps: return "gaps";
  case Kind::Evolve: return "evolve";
  case Kind::Decay: return "decay";
  case Kind::Strichartz: return "strichartz";
  case Kind::Nonlinear: return "nonlinear";
  case Kind::CombesThomas: return "combes-thomas";
  case Kind::Balakrishnan: return "balakrishnan";
  case Kind::VdcProbe: return "vdc-probe";
  }
  return "?";
}

std::optional<Kind> kind_from_string(const std::string& s) {
  for (Kind k : kAllKinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

const std::vector<std::string>& kind_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (Kind k : kAllKinds) v.emplace_back(to_string(k));
    return v;
  }();
  return names;
}

double golden_omega() { return pi * (std::sqrt(5.0) - 1.0); }

bool OutputConfig::has(const std::string& f) const {
  return std::find(formats.begin(), formats.end(), f) != formats.end();
}

potential::TrigPolynomialPotential ExperimentConfig::potential() const {
  const auto& md = model;
  if (md.potential == "zero") return potential::TrigPolynomialPotential::zero(md.dimension, md.radius);
  if (md.potential == "cosine")
    return potential::TrigPolynomialPotential::cosine(md.dimension, md.lambda, md.radius);
  return potential::TrigPolynomialPotential(md.dimension,
                                            parse_coeffs("model.coefficients", md.coefficients),
                                            md.radius);
}

std::vector<std::vector<double>> ExperimentConfig::theta_points() const {
  if (model.theta_grid == 0) return {model.theta};
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < model.theta_grid; ++i) {
    auto th = model.theta;
    for (double& x : th) x += 2.0 * pi * i / model.theta_grid;
    pts.push_back(std::move(th));
  }
  return pts;
}

std::vector<double> ExperimentConfig::data(const DataProfile& prof) const {
  const auto win = window();
  std::vector<double> x(win.size(), 0.0);
  if (prof.shape == "zero" || prof.amplitude == 0.0) return x;
  if (prof.shape == "delta") {
    x[win.offset(0)] = prof.amplitude;
    return x;
  }
  const int R = static_cast<int>(std::ceil(4.0 * prof.width));
  double nrm = 0.0;
  for (int n = -R; n <= R; ++n) {
    const double g = std::exp(-0.5 * n * n / (prof.width * prof.width));
    x[win.offset(n)] = g;
    nrm += g * g;
  }
  nrm = std::sqrt(nrm);
  for (double& v : x) v *= prof.amplitude / nrm;
  return x;
}

ExperimentConfig parse_config(const std::string& text, std::optional<Kind> kind_override) {
  // Full-line '#' comments become ';' comments, which the INI reader skips.
  std::string cleaned;
  {
    std::stringstream in(text);
    std::string line, section;
    std::set<std::string> seen;
    for (int n = 1; std::getline(in, line); ++n) {
      const auto b = line.find_first_not_of(" \t");
      if (b != std::string::npos && line[b] == '#') line[b] = ';';
      cleaned += line + "\n";
      const std::string t = trim(line);
      if (t.empty() || t[0] == ';') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = (section.empty() ? "" : section + ".") + trim(t.substr(0, eq));
      if (!seen.insert(key).second)
        throw ConfigError("line " + std::to_string(n) + ": duplicate key " + key);
    }
  }
  boost::property_tree::ptree pt;
  try {
    std::stringstream in(cleaned);
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  std::map<std::string, std::map<std::string, std::string>> raw;
  for (const auto& [name, node] : pt) {
    if (node.empty()) {
      raw[""][name] = node.data();
      continue;
    }
    if (name != "model" && name != "lattice" && name != "run" && name != "output")
      throw ConfigError("unknown section [" + name + "]");
    for (const auto& [key, leaf] : node) raw[name][key] = leaf.data();
  }

  Kind kind;
  if (raw["run"].count("kind")) {
    const auto k = kind_from_string(trim(raw["run"]["kind"]));
    if (!k) throw ConfigError("run.kind: unknown kind '" + raw["run"]["kind"] + "'");
    if (kind_override && *kind_override != *k)
      throw ConfigError("run.kind = " + std::string(to_string(*k)) +
                        " conflicts with the requested subcommand " + to_string(*kind_override));
    kind = *k;
  } else if (kind_override) {
    kind = *kind_override;
  } else {
    throw ConfigError("run.kind is required");
  }
  raw["run"]["kind"] = to_string(kind);

  ExperimentConfig c;
  auto& canon = c.canonical;
  for (const auto& [section, keys] : raw) {
    for (const auto& [key, value] : keys) {
      const KeySpec* spec = find_spec(section, key, kind);
      if (spec == nullptr) {
        if (known_anywhere(section, key))
          throw ConfigError(path(section, key) + ": not used by run kind " + to_string(kind));
        throw ConfigError(path(section, key) + ": unknown key");
      }
      canon[section][key] = canonical_value(*spec, value);
    }
  }
  for (const auto& spec : schema()) {
    if (!applies(spec, kind) || canon[spec.section].count(spec.key)) continue;
    if (spec.def) {
      canon[spec.section][spec.key] = canonical_value(spec, *spec.def);
      continue;
    }
    const std::string p = path(spec.section, spec.key);
    const auto dim = [&] {
      return static_cast<int>(parse_int("model.dimension", canon["model"]["dimension"]));
    };
    const int d = p.rfind("model.", 0) == 0 ? dim() : 1;
    if (p == "model.omega") {
      if (d != 1) throw ConfigError("model.omega is required when model.dimension > 1");
      canon["model"]["omega"] = real_text(golden_omega());
    } else if (p == "model.theta") {
      std::string z;
      for (int i = 0; i < std::max(d, 1); ++i) z += (i ? " 0" : "0");
      canon["model"]["theta"] = z;
    } else if (p == "model.eta") {
      canon["model"]["eta"] = real_text(std::max(1.0, static_cast<double>(d)));
    } else {
      throw ConfigError(p + " is required");
    }
  }

  auto get = [&](const std::string& s, const std::string& k) -> const std::string& {
    return canon.at(s).at(k);
  };
  auto real = [&](const std::string& s, const std::string& k) { return parse_real(path(s, k), get(s, k)); };
  auto integer = [&](const std::string& s, const std::string& k) {
    return parse_int(path(s, k), get(s, k));
  };
  auto list = [&](const std::string& s, const std::string& k) { return parse_list(path(s, k), get(s, k)); };
  auto has = [&](const std::string& k) { return canon["run"].count(k) > 0; };

  c.seed = parse_u64("seed", get("", "seed"));
  auto& md = c.model;
  md.dimension = static_cast<int>(integer("model", "dimension"));
  md.potential = get("model", "potential");
  md.lambda = real("model", "lambda");
  md.coefficients = get("model", "coefficients");
  md.radius = real("model", "radius");
  md.omega = list("model", "omega");
  md.eta = real("model", "eta");
  md.k_max = static_cast<int>(integer("model", "k_max"));
  md.theta = list("model", "theta");
  md.theta_grid = static_cast<int>(integer("model", "theta_grid"));
  md.m = real("model", "m");
  c.half_width = static_cast<int>(integer("lattice", "half_width"));
  c.boundary = get("lattice", "boundary");
  c.output.dir = get("output", "dir");
  c.output.formats = split_ws(get("output", "formats"));

  auto& r = c.run;
  r.kind = kind;
  const auto& run = canon["run"];
  if (has("op")) r.op = run.at("op");
  if (has("vectors")) r.vectors = run.at("vectors") == "true";
  if (has("energies")) r.energies = list("run", "energies");
  if (has("n_iter")) r.n_iter = static_cast<std::size_t>(integer("run", "n_iter"));
  if (has("e_min")) r.e_min = real("run", "e_min");
  if (has("e_max")) r.e_max = real("run", "e_max");
  if (has("e_step")) r.e_step = real("run", "e_step");
  if (has("rho_tol")) r.rho_tol = real("run", "rho_tol");
  if (has("k_label")) r.k_label = static_cast<int>(integer("run", "k_label"));
  if (has("phi")) r.phi = read_profile(run, "phi");
  if (has("psi")) r.psi = read_profile(run, "psi");
  if (has("t_min")) r.t_min = real("run", "t_min");
  if (has("t_max")) r.t_max = real("run", "t_max");
  if (has("samples")) r.samples = static_cast<std::size_t>(integer("run", "samples"));
  if (has("grid")) r.grid = run.at("grid");
  if (kind == Kind::Decay) r.grid = "geometric";
  if (has("lean")) r.lean = run.at("lean") == "true";
  if (has("accept_min")) r.accept_min = real("run", "accept_min");
  if (has("accept_max")) r.accept_max = real("run", "accept_max");
  if (has("tau")) r.tau = real("run", "tau");
  if (has("q")) r.q = list("run", "q");
  if (has("r")) r.r = list("run", "r");
  if (has("t_values")) r.t_values = list("run", "t_values");
  if (has("dt")) r.dt = real("run", "dt");
  if (has("p")) r.p = real("run", "p");
  if (has("sign")) r.sign = static_cast<int>(integer("run", "sign"));
  if (has("record_every")) r.record_every = static_cast<std::size_t>(integer("run", "record_every"));
  if (has("r_list")) r.r_list = list("run", "r_list");
  if (has("z")) r.z = list("run", "z");
  if (has("site")) r.site = static_cast<int>(integer("run", "site"));
  if (has("calibration")) r.calibration = real("run", "calibration");
  if (has("nodes")) r.nodes = static_cast<std::size_t>(integer("run", "nodes"));
  if (has("exponent")) r.exponent = real("run", "exponent");

  validate(c);
  return c;
}

std::string emit_config(const ExperimentConfig& c) {
  std::string out;
  auto top = c.canonical.find("");
  if (top != c.canonical.end())
    for (const auto& [k, v] : top->second) out += k + " = " + v + "\n";
  for (const auto& [section, keys] : c.canonical) {
    if (section.empty()) continue;
    out += "\n[" + section + "]\n";
    for (const auto& [k, v] : keys) out += k + " = " + v + "\n";
  }
  return out;
}

std::string config_hash(const ExperimentConfig& c) { return sha256_hex(emit_config(c)); }

} // namespace lkg::config
