// lkg: command-line front end for the lattice Klein-Gordon lab.

#include "lkg/acceptance.hpp"
#include "lkg/config.hpp"
#include "lkg/error.hpp"
#include "lkg/exec.hpp"
#include "lkg/report.hpp"
#include "lkg/run.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lkg::ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Klein-Gordon with a quasi-periodic potential"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int workers = 0;
  bool fixed_order = false;
  app.add_option("--config", config_path, "Experiment config file");
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_option("--workers", workers, "OpenMP worker count")->check(CLI::NonNegativeNumber);
  app.add_flag("--fixed-order", fixed_order, "Serial reductions for bit-exact output");

  for (const auto& name : lkg::config::kind_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->fallthrough();
  }
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->fallthrough();
  std::string suite = "fast";
  std::vector<int> only;
  verify->add_option("suite", suite, "fast | full");
  verify->add_option("--only", only, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  lkg::set_workers(workers);
  lkg::Exec exec;
  exec.fixed_order = fixed_order;

  try {
    if (verify->parsed()) {
      lkg::acceptance::Options opts;
      opts.only = only;
      opts.exec = exec;
      return lkg::acceptance::verify(suite, std::cout, opts);
    }
    const auto* sub = app.get_subcommands().front();
    const auto kind = lkg::config::kind_from_string(sub->get_name());
    if (config_path.empty()) throw lkg::UsageError("--config PATH is required for " + sub->get_name());
    const auto cfg = lkg::config::parse_config(read_file(config_path), kind);
    lkg::run::RunOptions ro;
    if (!out_dir.empty()) ro.out_dir = out_dir;
    ro.exec = exec;
    const auto rep = lkg::run::run(cfg, ro);
    for (const auto& c : rep.checks)
      std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name << ": " << lkg::report::cell(c.measured)
                << " (required " << c.required << ")\n";
    std::cout << "wrote " << rep.manifest.size() << " files and report.json to "
              << (ro.out_dir ? ro.out_dir->string() : cfg.output.dir) << "\n";
    return rep.all_pass() ? 0 : 1;
  } catch (const lkg::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const lkg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lkg::Error& e) {
    std::cerr << e.kind() << " error: " << e.what() << "\n";
    return 3;
  }
}
