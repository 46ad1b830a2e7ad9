#pragma once

// Small string helpers shared by the literal and file parsers.

#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "calab/common.hpp"

namespace calab::text {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  Int value{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

inline std::vector<unsigned> parse_uint_list(std::string_view s, std::string_view what) {
  std::vector<unsigned> out;
  s = trim(s);
  if (s.empty()) return out;
  for (auto part : split(s, ',')) out.push_back(parse_int<unsigned>(part, what));
  return out;
}

/// Parses `k1=v1 k2=v2 ...` tokens. Unknown keys are the caller's business.
inline std::map<std::string, std::string, std::less<>> parse_fields(std::string_view literal) {
  std::map<std::string, std::string, std::less<>> fields;
  for (auto token : split_ws(literal)) {
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw Error("malformed field '" + std::string(token) + "'");
    fields.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return fields;
}

inline const std::string& require(const std::map<std::string, std::string, std::less<>>& fields,
                                  std::string_view key) {
  const auto it = fields.find(key);
  if (it == fields.end()) throw Error("missing field '" + std::string(key) + "'");
  return it->second;
}

inline std::string join_symbols(const std::vector<std::uint8_t>& symbols, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(symbols[i]);
  }
  return out;
}

}  // namespace calab::text
