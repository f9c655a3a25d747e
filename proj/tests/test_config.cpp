#include "lkg/config.hpp"
#include "lkg/error.hpp"

#include <doctest.h>

#include <string>

using namespace lkg;
using namespace lkg::config;

namespace {

std::string message(const std::string& text, std::optional<Kind> k = std::nullopt) {
  try {
    parse_config(text, k);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& sub) { return s.find(sub) != std::string::npos; }

const char* kDecay = R"(seed = 7
[model]
potential = cosine
lambda = 0.1
[lattice]
half_width = 1000
[run]
kind = decay
)";

} // namespace

TEST_CASE("minimal decay config fills defaults") {
  const auto c = parse_config(kDecay);
  CHECK(c.seed == 7);
  CHECK(c.run.kind == Kind::Decay);
  CHECK(c.model.omega.size() == 1);
  CHECK(c.model.omega[0] == doctest::Approx(golden_omega()));
  CHECK(c.model.theta == std::vector<double>{0.0});
  CHECK(c.run.t_min == 50.0);
  CHECK(c.run.t_max == 1500.0);
  CHECK(c.run.samples == 240);
  CHECK(c.run.grid == "geometric");
  CHECK(c.canonical.at("run").at("accept_min") == "0.3");
  CHECK(c.canonical.at("model").at("eta") == "1");
  CHECK(c.half_width == 1000);
  CHECK(c.output.has("csv"));
  CHECK_FALSE(c.output.has("bin"));
}

TEST_CASE("emit and parse round trip") {
  const auto c = parse_config(kDecay);
  const auto text = emit_config(c);
  const auto d = parse_config(text);
  CHECK(d == c);
  CHECK(emit_config(d) == text);
  CHECK(config_hash(d) == config_hash(c));
  CHECK(config_hash(c).size() == 64);
  CHECK(text.rfind("seed = 7", 0) == 0);
}

TEST_CASE("hash comments are accepted") {
  const std::string t = "# leading comment\nseed = 1\n[run]\n# another\nkind = spectrum\n[lattice]\nhalf_width = 1\n";
  const auto c = parse_config(t);
  CHECK(c.half_width == 1);
}

TEST_CASE("inadmissible Strichartz pair names both keys") {
  const auto m = message("seed = 1\n[lattice]\nhalf_width = 600\n[run]\nkind = strichartz\ntau = 0.3\nq = 3\nr = 3\n");
  CHECK(contains(m, "run.q"));
  CHECK(contains(m, "run.r"));
}

TEST_CASE("duplicate keys cite the line") {
  const auto m = message("seed = 1\n[run]\nkind = spectrum\nkind = spectrum\n");
  CHECK(contains(m, "line 4"));
  CHECK(contains(m, "kind"));
}

TEST_CASE("unknown and misplaced keys") {
  CHECK(contains(message("seed = 1\n[run]\nkind = spectrum\nbogus = 2\n"), "run.bogus"));
  CHECK(contains(message("seed = 1\n[run]\nkind = spectrum\ndt = 0.1\n"), "run.dt"));
  CHECK(contains(message("seed = 1\n[colour]\nx = 1\n[run]\nkind = spectrum\n"), "colour"));
}

TEST_CASE("missing and malformed values") {
  CHECK(contains(message("[run]\nkind = spectrum\n"), "seed"));
  CHECK(contains(message("seed = 1\n"), "run.kind"));
  CHECK(contains(message("seed = x\n[run]\nkind = spectrum\n"), "seed"));
  CHECK(contains(message("seed = 1\n[lattice]\nhalf_width = 3.5\n[run]\nkind = spectrum\n"), "lattice.half_width"));
  CHECK(contains(message("seed = 1\n[run]\nkind = spectrum\nvectors = maybe\n"), "run.vectors"));
  CHECK(contains(message("seed = 1\n[run]\nkind = sideways\n"), "run.kind"));
  CHECK(contains(message("seed = 1\n[model]\ndimension = 2\n[run]\nkind = spectrum\n"), "model.omega"));
}

TEST_CASE("CLI kind must agree with the file") {
  CHECK_FALSE(message(kDecay, Kind::Spectrum).empty());
  CHECK(parse_config(kDecay, Kind::Decay).run.kind == Kind::Decay);
  const auto c = parse_config("seed = 1\n[lattice]\nhalf_width = 2\n", Kind::Spectrum);
  CHECK(c.run.kind == Kind::Spectrum);
}

TEST_CASE("cross-field checks name their key") {
  CHECK(contains(message("seed = 1\n[lattice]\nhalf_width = 50\n[run]\nkind = decay\n"), "lattice.half_width"));
  CHECK(contains(message("seed = 1\n[model]\npotential = cosine\nlambda = 5\nm = 0.1\n[run]\nkind = evolve\n"),
                 "model.m"));
  CHECK(contains(message("seed = 1\n[model]\nomega = 3.141592653589793\n[run]\nkind = spectrum\n"), "model.omega"));
  CHECK(contains(message("seed = 1\n[lattice]\nhalf_width = 600\n[run]\nkind = nonlinear\ndt = 0.2\n"), "run.dt"));
  CHECK(contains(message("seed = 1\n[lattice]\nhalf_width = 1000\n[run]\nkind = decay\nt_max = 90\n"), "run.t_max"));
  CHECK(contains(message("seed = 1\n[lattice]\nhalf_width = 300\n[run]\nkind = balakrishnan\n"), "lattice.half_width"));
  CHECK(contains(message("seed = 1\n[model]\npotential = cosine\nlambda = 0.1\n[run]\nkind = vdc-probe\n"),
                 "model.potential"));
}

TEST_CASE("initial data profiles") {
  auto c = parse_config(kDecay);
  const auto phi = c.data(c.run.phi);
  CHECK(phi.size() == 2001);
  CHECK(phi[1000] == 1.0);
  DataProfile g{"gaussian", 2.0, 3.0};
  const auto x = c.data(g);
  double s = 0.0;
  for (double v : x) s += v * v;
  CHECK(std::sqrt(s) == doctest::Approx(2.0));
  CHECK(x[1000] > x[1001]);
  CHECK(x[1001] == doctest::Approx(x[999]));
}

TEST_CASE("theta grid") {
  const auto c = parse_config("seed = 1\n[model]\ntheta_grid = 4\n[lattice]\nhalf_width = 1000\n[run]\nkind = decay\n");
  const auto th = c.theta_points();
  REQUIRE(th.size() == 4);
  CHECK(th[1][0] == doctest::Approx(std::numbers::pi / 2));
}
