#pragma once

// Experiment orchestration: one config in, output files plus a RunReport out.

#include "lkg/config.hpp"
#include "lkg/error.hpp"
#include "lkg/exec.hpp"
#include "lkg/report.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace lkg::run {

/// A module error annotated with the run kind and config hash. kind() keeps
/// the category of the underlying error.
struct RunError : Error {
  RunError(const Error& inner, config::Kind run_kind_, std::string config_hash_);
  config::Kind run_kind;
  std::string config_hash;
};

struct RunOptions {
  /// Overrides output.dir from the config.
  std::optional<std::filesystem::path> out_dir;
  Exec exec{};
};

/// Writes the kind's outputs, the canonical config echo (config.ini) and,
/// last, report.json. Returns the report that was written.
report::RunReport run(const config::ExperimentConfig& cfg, const RunOptions& opts = {});

} // namespace lkg::run
