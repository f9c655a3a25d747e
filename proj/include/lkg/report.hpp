#pragma once

// Run reports and output files. Every file written through an OutputDir is
// hashed into the manifest; the report JSON is the last artifact of a run.

#include "lkg/config.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace lkg::report {

struct Check {
  std::string name;
  std::string required;
  double measured = 0.0;
  bool pass = false;
};

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct RunReport {
  std::map<std::string, std::map<std::string, std::string>> config;
  std::string version;
  double wall_time_s = 0.0;
  std::vector<Check> checks;
  std::vector<ManifestEntry> manifest;

  bool all_pass() const;
};

const char* version();

class OutputDir {
public:
  explicit OutputDir(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  /// Writes `name` under the directory and appends it to the manifest.
  void write(const std::string& name, std::string_view content);
  const std::vector<ManifestEntry>& manifest() const { return manifest_; }

private:
  std::filesystem::path dir_;
  std::vector<ManifestEntry> manifest_;
};

/// Header plus rows of preformatted cells.
class Csv {
public:
  explicit Csv(std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);
  const std::string& text() const { return text_; }

private:
  std::size_t width_;
  std::string text_;
};

/// Shortest round-trip text; infinities as "inf", NaN as "nan".
std::string cell(double x);

/// Rows of little-endian f64, row-major.
std::string f64_rows(const std::vector<std::vector<double>>& rows);

/// {config, version, wall_time_s, checks, manifest}.
std::string to_json(const RunReport& r);
RunReport from_json(const std::string& text);

/// Hash of the report with wall_time_s removed: the quantity that must agree
/// between two runs of the same canonical config.
std::string content_hash(const RunReport& r);

} // namespace lkg::report
