#pragma once

// Arithmetic of the two closed monoidal preorders used throughout:
//   ([0,1], *, 1) with truncated division as internal hom, and
//   ([0,inf], +, 0) with truncated subtraction as internal hom.
// The two are isomorphic through a |-> -ln a.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace enriched {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Internal hom of [0,1]: the largest u with u * a <= b.
/// For a == 0 every u qualifies, so [0,b] = 1 (including [0,0] = 1).
inline double truncated_div(double a, double b) noexcept {
  if (a <= 0.0 || b >= a) return 1.0;
  return b / a;
}

/// Internal hom of [0,inf]: max{b - a, 0}, the smallest u with b <= a + u.
/// Conventions: inf - inf = 0, inf - finite = inf, finite - inf = 0.
inline double truncated_sub(double a, double b) noexcept {
  if (std::isinf(b)) return std::isinf(a) ? 0.0 : kInfinity;
  if (std::isinf(a)) return 0.0;
  return b > a ? b - a : 0.0;
}

/// a |-> -ln a, sending 0 to +inf and 1 to +0.
inline double neg_log(double a) noexcept {
  if (a <= 0.0) return kInfinity;
  return 0.0 - std::log(a);
}

/// a |-> e^{-a}, sending +inf to 0 exactly.
inline double neg_exp(double a) noexcept {
  if (std::isinf(a)) return 0.0;
  return std::exp(-a);
}

/// Tropical multiplication on [0,inf]; inf absorbs.
inline double tropical_mul(double s, double a) noexcept {
  if (std::isinf(s) || std::isinf(a)) return kInfinity;
  return s + a;
}

/// 12 significant digits, "inf" for +infinity. Used by every text output.
inline std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace enriched
