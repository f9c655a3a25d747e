#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lkg {

/// Base for every error raised by the library. `kind()` is a stable short tag
/// used in run reports.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error("config", w) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& w) : Error("usage", w) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& w) : Error("domain", w) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& w) : Error("dimension", w) {}
};

/// An exact rational resonance <k, omega> in pi*Z within the probe cutoff.
struct ResonanceError : Error {
  ResonanceError(std::vector<int> k_, const std::string& w)
      : Error("resonance", w), k(std::move(k_)) {}
  std::vector<int> k;
};

struct PositivityError : Error {
  explicit PositivityError(const std::string& w) : Error("positivity", w) {}
};

struct NearSingularError : Error {
  explicit NearSingularError(const std::string& w) : Error("near-singular", w) {}
};

struct PrecisionError : Error {
  PrecisionError(double estimate_, const std::string& w)
      : Error("precision", w), estimate(estimate_) {}
  double estimate;
};

/// The lattice window is too small for the requested computation.
struct WindowError : Error {
  explicit WindowError(const std::string& w) : Error("window", w) {}
};

/// Boundary sentinel tripped: the truncated trajectory is no longer a faithful
/// restriction of the infinite-lattice one.
struct ContaminationError : Error {
  explicit ContaminationError(const std::string& w) : Error("contaminated-trajectory", w) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& w) : Error("insufficient-data", w) {}
};

struct MissingStatesError : Error {
  explicit MissingStatesError(const std::string& w) : Error("missing-states", w) {}
};

} // namespace lkg
