// Acceptance driver: one PASS/FAIL line per criterion.

#include "lkg/acceptance.hpp"
#include "lkg/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string suite = "full";
  std::vector<int> only;
  app.add_option("--suite", suite, "fast | full");
  app.add_option("--only", only, "Criterion ids to run");
  CLI11_PARSE(app, argc, argv);
  try {
    lkg::acceptance::Options opts;
    opts.only = only;
    return lkg::acceptance::verify(suite, std::cout, opts);
  } catch (const lkg::Error& e) {
    std::cerr << e.kind() << " error: " << e.what() << "\n";
    return 2;
  }
}
