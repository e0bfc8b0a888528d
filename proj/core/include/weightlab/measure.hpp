#pragma once

#include "weightlab/rational.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace weightlab {

/// Half-open interval [a, b) with exact endpoints; a < b.
class Interval {
 public:
  Interval(Rational a, Rational b);

  const Rational& a() const noexcept { return a_; }
  const Rational& b() const noexcept { return b_; }
  /// Left and right endpoints under the lep/rep naming.
  const Rational& lep() const noexcept { return a_; }
  const Rational& rep() const noexcept { return b_; }

  Rational length() const { return b_ - a_; }
  Rational center() const { return (a_ + b_) / 2; }
  bool contains(const Rational& x) const { return a_ <= x && x < b_; }
  bool contains(const Interval& other) const { return a_ <= other.a_ && other.b_ <= b_; }
  bool intersects(const Interval& other) const { return a_ < other.b_ && other.a_ < b_; }
  std::optional<Interval> intersection(const Interval& other) const;
  Interval translated(const Rational& t) const { return {a_ + t, b_ + t}; }
  /// Middle third.
  Interval middle_third() const;

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Rational a_;
  Rational b_;
};

struct Piece {
  Interval interval;
  Rational density;
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct Atom {
  Rational position;
  Rational mass;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Compactly supported measure: piecewise-constant Lebesgue density on finitely
/// many disjoint half-open intervals plus finitely many point masses.
///
/// Pieces are kept sorted, zero-density pieces are dropped and abutting pieces
/// with equal density are merged. An atom at a piece boundary belongs to the
/// interval having that point as its left endpoint.
class PiecewiseMeasure {
 public:
  PiecewiseMeasure() = default;
  PiecewiseMeasure(std::vector<Piece> pieces, std::vector<Atom> atoms = {}, bool approximate = false);

  static PiecewiseMeasure uniform(const Interval& support, const Rational& total_mass);

  std::span<const Piece> pieces() const noexcept { return pieces_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  bool empty() const noexcept { return pieces_.empty() && atoms_.empty(); }
  bool has_atoms() const noexcept { return !atoms_.empty(); }
  /// Densities were rounded from irrational values at the working precision.
  bool approximate() const noexcept { return approximate_; }

  Rational total_mass() const;
  /// Exact mu([a, b)).
  Rational measure_of(const Interval& interval) const;
  /// Absolutely continuous part of mu((-inf, x)).
  Rational cdf(const Rational& x) const;
  /// Density at x; throws AtomAtPoint when x carries an atom.
  Rational density_at(const Rational& x) const;
  /// Index of the piece containing x, if any.
  std::optional<size_t> piece_index(const Rational& x) const;

  PiecewiseMeasure translated(const Rational& t) const;
  PiecewiseMeasure scaled(const Rational& c) const;
  /// Image under x -> -x; pieces [a,b) become [-b,-a).
  PiecewiseMeasure reflected() const;
  /// 1_I mu.
  PiecewiseMeasure restricted(const Interval& interval) const;
  /// Density d^exponent on supp mu. Falls back to rounded densities (and marks
  /// the result approximate) when allow_approximate is set, otherwise throws
  /// NonRationalPower.
  PiecewiseMeasure power_weight(const Rational& exponent, bool allow_approximate = true) const;

  /// Closed bounds [min, max] of the support, if nonempty.
  std::optional<std::pair<Rational, Rational>> support_bounds() const;
  /// Sorted distinct piece endpoints.
  std::vector<Rational> breakpoints() const;

  friend bool operator==(const PiecewiseMeasure& x, const PiecewiseMeasure& y) {
    return x.pieces_ == y.pieces_ && x.atoms_ == y.atoms_;
  }

 private:
  void normalize();

  std::vector<Piece> pieces_;
  std::vector<Atom> atoms_;
  std::vector<Rational> prefix_;  // mass of pieces strictly before index i
  bool approximate_ = false;
};

/// Sum of measures whose supports are pairwise disjoint (atoms may coincide
/// and add up).
PiecewiseMeasure disjoint_sum(std::span<const PiecewiseMeasure> parts);

Rational total_mass(const PiecewiseMeasure& mu);
Rational measure_of(const PiecewiseMeasure& mu, const Interval& interval);
PiecewiseMeasure translate(const PiecewiseMeasure& mu, const Rational& t);
Rational density_at(const PiecewiseMeasure& mu, const Rational& x);
PiecewiseMeasure power_weight(const PiecewiseMeasure& mu, const Rational& exponent);

}  // namespace weightlab
