#pragma once

// Minimal comma-separated input/output helpers shared by the file formats.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "tubevol/errors.hpp"

namespace tubevol::csv {

/// Yields comma-split records, skipping blank lines and lines whose first
/// non-blank character is '#'. Fields are trimmed of surrounding blanks.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      split(line, fields);
      return true;
    }
    return false;
  }

  /// 1-based number of the line last returned.
  int line_number() const { return line_; }

  static void split(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }

  static std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

/// Parses a whole field as a finite double; `where` prefixes the error message.
inline double parse_double(std::string_view field, const std::string& where) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty() || !std::isfinite(value))
    throw InputError(where + ": '" + std::string(field) + "' is not a finite decimal number");
  return value;
}

/// Shortest decimal that parses back to exactly `x`.
inline std::string format_exact(double x) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

/// `digits` significant digits, printf %g style.
inline std::string format_sig(double x, int digits = 12) {
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, x);
  return buf.data();
}

inline const char* format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace tubevol::csv
