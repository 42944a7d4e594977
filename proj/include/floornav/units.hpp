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

#ifndef FLOORNAV_UNITS_HPP
#define FLOORNAV_UNITS_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "floornav/angles.hpp"

namespace floornav::units {

enum class Dimension { kLength, kAngle, kTime, kSpeed };

/// Numeric text with an optional unit suffix, converted to SI (m, rad, s, m/s).
/// A bare number is taken to be already in SI units.
inline double parse(const std::string& text, Dimension dim) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (!std::isfinite(value)) throw std::invalid_argument("not finite: '" + text + "'");
  const std::string suffix = text.substr(used);
  if (suffix.empty()) return value;

  using Table = std::vector<std::pair<const char*, double>>;
  static const Table length{{"m", 1.0}, {"cm", 0.01}, {"mm", 0.001}};
  static const Table angle{{"rad", 1.0}, {"deg", kPi / 180.0}};
  static const Table time{{"s", 1.0}, {"ms", 0.001}};
  static const Table speed{{"m/s", 1.0}, {"cm/s", 0.01}};
  const Table& table = dim == Dimension::kLength ? length
                       : dim == Dimension::kAngle ? angle
                       : dim == Dimension::kTime  ? time
                                                  : speed;
  for (const auto& [name, scale] : table) {
    if (suffix == name) return value * scale;
  }
  throw std::invalid_argument("unit '" + suffix + "' does not fit '" + text + "'");
}

inline double length(const std::string& s) { return parse(s, Dimension::kLength); }
inline double angle(const std::string& s) { return parse(s, Dimension::kAngle); }

/// Comma-separated list, each entry parsed with its own dimension.
inline std::vector<double> parse_tuple(const std::string& text, const std::vector<Dimension>& dims) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const auto comma = text.find(',', from);
    parts.push_back(text.substr(from, comma == std::string::npos ? std::string::npos : comma - from));
    if (comma == std::string::npos) break;
    from = comma + 1;
  }
  if (parts.size() != dims.size()) {
    throw std::invalid_argument("expected " + std::to_string(dims.size()) + " comma-separated values in '" + text +
                                "'");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < parts.size(); ++i) out.push_back(parse(parts[i], dims[i]));
  return out;
}

}  // namespace floornav::units

#endif  // FLOORNAV_UNITS_HPP
