#pragma once

#include "weightlab/measure.hpp"

#include <nlohmann/json.hpp>

#include <string_view>
#include <vector>

namespace weightlab {

enum class GridKind { Dyadic, Shifted };

std::string_view to_string(GridKind kind) noexcept;
GridKind parse_grid_kind(std::string_view text);

/// One grid family over a window of scales. Dyadic intervals are
/// [2^j n, 2^j (n + 1)); shifted ones are translated by (-1)^j 2^j / 3, which
/// keeps them nested: the children of (j, n) are (j - 1, 2n + (-1)^j) and the
/// next one.
struct GridFamily {
  GridKind kind = GridKind::Dyadic;
  int j_min = -40;
  int j_max = 8;
};

struct GridInterval {
  GridKind kind = GridKind::Dyadic;
  int j = 0;
  Integer n = 0;

  Interval interval() const;
  std::vector<GridInterval> children() const;
  /// Grid interval of the given kind and scale containing x.
  static GridInterval containing(GridKind kind, int j, const Rational& x);

  friend bool operator==(const GridInterval&, const GridInterval&) = default;
  friend auto operator<=>(const GridInterval& x, const GridInterval& y) {
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.j <=> y.j; c != 0) return c;
    return x.n.compare(y.n) <=> 0;
  }
};

Rational grid_offset(GridKind kind, int j);

struct CoverResult {
  GridInterval cover;
  Rational ratio;  // |I_d| / |I|
};

/// Smallest grid interval of either family containing I, scanning scales
/// upward from the first j with 2^j >= |I| (dyadic first within a scale).
/// Throws ScaleRange when nothing within [j_min, j_max] contains I.
CoverResult christ_cover(const Interval& interval, int j_min = -40, int j_max = 8);

struct DyadicMaximalValue {
  Rational value;        // best average over the grid window
  Rational tail_bound;   // bound for every average above j_max
  Rational certified;    // max(value, tail_bound)
  GridInterval argmax;
};

/// Best average over grid intervals containing x at scales [j_min, j_max], for
/// one family or both when `both` is set.
DyadicMaximalValue dyadic_maximal(const PiecewiseMeasure& mu, const Rational& x, const GridFamily& grid,
                                  bool both = false);

/// Dyadic linearization of M(1_Q w) on Q. Each x in Q is assigned the grid
/// interval with the strictly largest average of 1_Q w along its chain of
/// ancestors, ties kept by the larger interval. E(I) is the set assigned to I.
struct LinearizationMap {
  struct Assignment {
    GridInterval interval;
    Rational average;          // w(I cap Q) / |I|
    std::vector<Interval> set; // E(I), sorted, disjoint
    bool contains_q = false;   // Q subset of I
  };
  struct Leaf {
    Interval piece;
    size_t assignment;
    bool straddles;  // finest-scale leaf with a breakpoint of 1_Q w inside
  };

  Interval q;
  GridFamily grid;
  std::vector<Assignment> assignments;  // sorted by interval
  std::vector<Leaf> leaves;             // sorted by position, partition of Q
  size_t nodes_visited = 0;

  /// L(1_Q w)(x) for x in Q.
  Rational value_at(const Rational& x) const;
  nlohmann::json to_json() const;
};

LinearizationMap linearize_maximal(const PiecewiseMeasure& w, const Interval& q, const GridFamily& grid);

}  // namespace weightlab
