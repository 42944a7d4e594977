// Copyright 2026 The floornav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FLOORNAV_TEXT_IO_HPP
#define FLOORNAV_TEXT_IO_HPP

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace floornav {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

namespace text {

/// printf "%.<digits>g"; negative zero is normalized so output is stable.
inline std::string sig(double v, int digits = 9) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// printf "%.<decimals>f"; negative zero is normalized.
inline std::string fixed(double v, int decimals = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::vector<std::string> split(std::string_view line, std::string_view delims = " \t\r") {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const auto start = line.find_first_not_of(delims, i);
    if (start == std::string_view::npos) break;
    const auto end = line.find_first_of(delims, start);
    out.emplace_back(line.substr(start, end == std::string_view::npos ? line.npos : end - start));
    i = end == std::string_view::npos ? line.size() : end;
  }
  return out;
}

inline double parse_double(const std::string& s, int line = 0) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("expected a number, got '" + s + "'", line);
  }
  return v;
}

inline long parse_int(const std::string& s, int line = 0) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
  return v;
}

/// Reads non-blank lines, skipping everything after '#'. Calls fn(tokens, line_number).
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tokens = split(line);
    if (!tokens.empty()) fn(tokens, n);
  }
}

}  // namespace text
}  // namespace floornav

#endif  // FLOORNAV_TEXT_IO_HPP
