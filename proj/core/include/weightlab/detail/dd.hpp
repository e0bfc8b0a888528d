#pragma once

// Minimal double-double helpers: enough to keep point-to-breakpoint distances
// accurate when both sit near 3^k with separations down to ~1e-30.

#include "weightlab/rational.hpp"

namespace weightlab::detail {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD add(DD x, double y) {
  DD s = two_sum(x.hi, y);
  s.lo += x.lo;
  return two_sum(s.hi, s.lo);
}

/// x - y rounded to double.
inline double diff(DD x, DD y) {
  DD s = two_sum(x.hi, -y.hi);
  return s.hi + (s.lo + (x.lo - y.lo));
}

/// base + offset kept unevaluated, so offsets far below the resolution of
/// base still give exact distances to base itself.
struct Point {
  DD base;
  double offset = 0.0;
};

/// t - x rounded to double.
inline double distance(DD t, const Point& x) { return diff(t, x.base) - x.offset; }

inline bool equal(DD x, DD y) { return x.hi == y.hi && x.lo == y.lo; }

inline DD to_dd(const Rational& q) {
  const double hi = to_double(q);
  const double lo = to_double(q - from_double(hi));
  return two_sum(hi, lo);
}

}  // namespace weightlab::detail
