#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "foldcore/errors.hpp"

namespace foldcore {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline constexpr double kSingularRelTol = 1e-12;
inline constexpr double kOverflowThreshold = 1e8;

/// Thresholds shared by every evaluation path.
struct NumericPolicy {
  double singular_rel_tol = kSingularRelTol;
  double overflow = kOverflowThreshold;
};

/// |den| < tol * max(1, |num|)
inline bool is_singular_denominator(double num, double den,
                                    double rel_tol = kSingularRelTol) {
  return !(std::abs(den) >= rel_tol * std::max(1.0, std::abs(num)));
}

inline double checked_divide(double num, double den, std::string_view what,
                             double rel_tol = kSingularRelTol) {
  if (is_singular_denominator(num, den, rel_tol)) {
    throw SingularError(std::string(what), num, den);
  }
  return num / den;
}

inline bool exceeds(const Point& p, double threshold) {
  return !(std::abs(p.x) <= threshold && std::abs(p.y) <= threshold);
}

/// Shortest decimal that round-trips.
std::string format_real(double value);

/// Fixed 17 significant digits, used for CSV output.
std::string format_csv_real(double value);

}  // namespace foldcore
