#pragma once

// Acceptance criteria 1-13 as executable checks, each reporting the
// measured quantity next to its required tolerance.

#include "lkg/cocycle.hpp"
#include "lkg/exec.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lkg::acceptance {

enum class Suite { Fast, Full };

std::optional<Suite> suite_from_string(const std::string& s);

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string required;
  std::string measured;
  bool pass = false;
  std::vector<std::string> detail;  // extra measurements and analysis lines
  double seconds = 0.0;
};

/// Transfer-matrix override for the rotation-number criterion; used to run
/// the suite against a deliberately broken cocycle.
using TransferFn = std::function<cocycle::TransferMatrix(
    double E, const potential::TrigPolynomialPotential& V, std::span<const double> theta)>;

struct Options {
  Suite suite = Suite::Fast;
  std::vector<int> only;  // empty: all criteria
  TransferFn transfer;    // empty: cocycle::transfer
  Exec exec{};
  std::ostream* progress = nullptr;  // one line per finished criterion
};

constexpr int kCriteria = 13;

CriterionResult run_criterion(int id, const Options& opts);
std::vector<CriterionResult> run_criteria(const Options& opts);

/// One pass/fail line per criterion followed by its detail lines.
void print_result(std::ostream& out, const CriterionResult& r);
void print_table(std::ostream& out, const std::vector<CriterionResult>& results);

/// Runs the named suite, prints the table and returns the exit status
/// (0 all pass, 1 any failure). Unknown suite names throw UsageError.
int verify(const std::string& suite_name, std::ostream& out, Options opts = {});

} // namespace lkg::acceptance
