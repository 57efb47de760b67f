#pragma once

#include <charconv>
#include <optional>
#include <string>

namespace octmc {

// Locale-independent fixed-point formatting; output bytes depend only on the
// value, which keeps CSV files byte-comparable across runs.
inline std::string fmt_fixed(double value, int precision) {
  char buf[64];
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  const auto r = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, precision);
  std::string s(buf, r.ptr);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

inline std::string fmt_optional(const std::optional<double>& value, int precision) {
  return value ? fmt_fixed(*value, precision) : std::string{};
}

}  // namespace octmc
