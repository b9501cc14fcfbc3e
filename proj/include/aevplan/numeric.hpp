#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace aevplan {

// Relative comparison used wherever float sums over different arc orders must
// be treated as ties.
inline bool nearly_equal(double a, double b, double rel = 1e-9) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Shortest round-trip decimal representation, locale independent.
std::string format_number(double value);

// Inverse of format_number; also accepts "inf" and "-inf".
double parse_number(const std::string& text);

}  // namespace aevplan
