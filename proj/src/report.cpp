#include "lkg/report.hpp"
#include "lkg/error.hpp"
#include "lkg/format.hpp"
#include "lkg/hash.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#ifndef LKG_VERSION
#define LKG_VERSION "0.0.0"
#endif

namespace lkg::report {

static_assert(std::endian::native == std::endian::little, "binary outputs assume a little-endian host");

using nlohmann::ordered_json;

const char* version() { return LKG_VERSION; }

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

OutputDir::OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error("io", "cannot create output directory " + dir_.string() + ": " + ec.message());
}

void OutputDir::write(const std::string& name, std::string_view content) {
  const auto p = dir_ / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error("io", "cannot write " + p.string());
  for (auto& e : manifest_)
    if (e.path == name) {
      e.sha256 = sha256_hex(content);
      return;
    }
  manifest_.push_back({name, sha256_hex(content)});
}

std::string cell(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return num(x);
}

Csv::Csv(std::vector<std::string> columns) : width_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) text_ += (i ? "," : "") + columns[i];
  text_ += "\n";
}

void Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw DimensionError("csv row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
  text_ += "\n";
}

void Csv::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(cell(v));
  row(cells);
}

std::string f64_rows(const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& r : rows) {
    const std::size_t at = out.size();
    out.resize(at + r.size() * sizeof(double));
    std::memcpy(out.data() + at, r.data(), r.size() * sizeof(double));
  }
  return out;
}

namespace {

ordered_json measured_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double measured_value(const ordered_json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return NAN;
}

ordered_json to_object(const RunReport& r, bool with_time) {
  ordered_json j;
  ordered_json cfg = ordered_json::object();
  for (const auto& [section, keys] : r.config) {
    if (section.empty()) {
      for (const auto& [k, v] : keys) cfg[k] = v;
      continue;
    }
    ordered_json sec = ordered_json::object();
    for (const auto& [k, v] : keys) sec[k] = v;
    cfg[section] = sec;
  }
  j["config"] = cfg;
  j["version"] = r.version;
  if (with_time) j["wall_time_s"] = r.wall_time_s;
  j["checks"] = ordered_json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back(
        {{"name", c.name}, {"required", c.required}, {"measured", measured_json(c.measured)}, {"pass", c.pass}});
  j["manifest"] = ordered_json::array();
  for (const auto& m : r.manifest) j["manifest"].push_back({{"path", m.path}, {"sha256", m.sha256}});
  return j;
}

} // namespace

std::string to_json(const RunReport& r) { return to_object(r, true).dump(2) + "\n"; }

RunReport from_json(const std::string& text) {
  RunReport r;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    for (const auto& [k, v] : j.at("config").items()) {
      if (v.is_object())
        for (const auto& [kk, vv] : v.items()) r.config[k][kk] = vv.get<std::string>();
      else
        r.config[""][k] = v.get<std::string>();
    }
    r.version = j.at("version").get<std::string>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    for (const auto& c : j.at("checks"))
      r.checks.push_back({c.at("name").get<std::string>(), c.at("required").get<std::string>(),
                          measured_value(c.at("measured")), c.at("pass").get<bool>()});
    for (const auto& m : j.at("manifest"))
      r.manifest.push_back({m.at("path").get<std::string>(), m.at("sha256").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", std::string("malformed run report: ") + e.what());
  }
  return r;
}

std::string content_hash(const RunReport& r) { return sha256_hex(to_object(r, false).dump()); }

} // namespace lkg::report
