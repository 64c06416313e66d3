#ifndef MHDREG_SRC_PARSE_UTIL_HPP_
#define MHDREG_SRC_PARSE_UTIL_HPP_

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

namespace mhdreg::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// Whole-string decimal parse. "inf" and "infinity" give +infinity; NaN is
/// rejected.
inline std::optional<double> parse_real(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) return std::nullopt;
  if (s == "inf" || s == "infinity" || s == "+inf") return HUGE_VAL;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || std::isnan(v)) return std::nullopt;
  return v;
}

inline std::optional<long long> parse_integer(std::string_view text) {
  const std::string s(trim(text));
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

}  // namespace mhdreg::detail

#endif  // MHDREG_SRC_PARSE_UTIL_HPP_
