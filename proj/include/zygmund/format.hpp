#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <string_view>

#include "zygmund/errors.hpp"

namespace zygmund {

// Shortest decimal text that reads back to the same double.
inline std::string format_number(double value) {
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

// Fixed-width scientific notation used by the CSV writers.
inline std::string format_sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", value);
  return buf;
}

inline std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n";
  auto const first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  auto const last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

namespace detail {

inline double parse_double(std::string_view text, std::string_view what) {
  // from_chars takes plain decimal/exponent notation only (no hex, no locale)
  std::string const s(trim(text));
  double v = 0.0;
  auto const [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(v))
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + s + "'");
  return v;
}

}  // namespace detail

}  // namespace zygmund
