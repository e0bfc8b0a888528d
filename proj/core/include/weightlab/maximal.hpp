#pragma once

#include "weightlab/detail/dd.hpp"
#include "weightlab/measure.hpp"

#include <vector>

namespace weightlab {

/// Hardy-Littlewood maximal function sup_{I containing x} mu(I)/|I|, exact.
///
/// An average over [l, r] with l <= x <= r never exceeds the larger of the
/// averages over [l, x] and [x, r], so M is the larger of the two one-sided
/// suprema. Each one-sided average is monotone while its free endpoint moves
/// through a cell of constant density, so the candidates are the breakpoints
/// together with the density limits at x. Throws AtomicPart for measures with
/// atoms.
Rational maximal_exact(const PiecewiseMeasure& mu, const Rational& x);

/// Lower bound for maximal_exact: the best average over intervals whose two
/// endpoints lie on a grid of about n points (uniform on the support hull,
/// geometrically refined toward the breakpoints nearest to x).
Rational maximal_grid_oracle(const PiecewiseMeasure& mu, const Rational& x, int n);

/// Exact maximal function of an atom-free measure on its support hull,
/// stored as segments on which M(x) = d + C / |x - v| with exact d, C >= 0, v.
///
/// Built by one sweep in each direction over an incremental lower convex hull
/// of the cumulative mass graph; the optimal hull vertex for a given cell is
/// found by exact binary search and ranges of x sharing a vertex are split at
/// exact crossing points.
class MaximalProfile {
 public:
  struct Segment {
    Rational lo, hi;
    Rational d, c, v;
    detail::DD v_dd;
    double d_double = 0.0, c_double = 0.0;
  };

  explicit MaximalProfile(const PiecewiseMeasure& mu);

  /// Exact value; points outside the support hull fall back to maximal_exact.
  Rational value_at(const Rational& x) const;
  /// Double evaluation at a double-double point inside the support hull.
  double value_at(const detail::Point& x) const;
  /// Index of the segment containing x (segments are closed on the left).
  size_t locate(const Rational& x) const;
  double value_in(size_t segment, const detail::Point& x) const;
  Rational value_in(size_t segment, const Rational& x) const;

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const PiecewiseMeasure& measure() const noexcept { return mu_; }
  bool empty() const noexcept { return segments_.empty(); }

 private:
  PiecewiseMeasure mu_;
  std::vector<Segment> segments_;
  std::vector<double> lo_double_;
};

}  // namespace weightlab
