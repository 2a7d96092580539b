#pragma once

// Small helpers shared by the text file readers.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uro/error.hpp"

namespace uro::text {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::int64_t parse_int(std::string_view s, std::string_view field,
                              int line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad integer '" + std::string(s) + "' in field '" +
                         std::string(field) + "'",
                     line);
  return v;
}

inline double parse_double(std::string_view s, std::string_view field,
                           int line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("bad number '" + std::string(s) + "' in field '" +
                         std::string(field) + "'",
                     line);
  return v;
}

}  // namespace uro::text
