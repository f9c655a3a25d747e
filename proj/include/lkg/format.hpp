#pragma once

#include <charconv>
#include <string>

namespace lkg {

/// Shortest decimal string that round-trips to the same double.
inline std::string num(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

} // namespace lkg
