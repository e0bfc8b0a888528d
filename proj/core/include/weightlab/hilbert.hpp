#pragma once

#include "weightlab/detail/dd.hpp"
#include "weightlab/measure.hpp"

#include <vector>

namespace weightlab {

enum class TransformKind { Finite, PlusInfinity, MinusInfinity };

std::string_view to_string(TransformKind kind) noexcept;

/// Hilbert transform value with kernel 1/(y - x).
struct TransformValue {
  Real value;
  TransformKind kind = TransformKind::Finite;
  double error_bound = 0.0;

  bool finite() const noexcept { return kind == TransformKind::Finite; }
  double to_double() const;
};

/// Closed form p.v. integral of dmu(y)/(y - x): one logarithm of an exact
/// rational ratio per piece plus m/(z - x) per atom. Returns an infinite kind
/// when x is a breakpoint with a nonzero density jump. Throws AtomAtPoint.
TransformValue hilbert_exact(const PiecewiseMeasure& mu, const Rational& x);

/// Independent check of hilbert_exact by adaptive Gauss-Kronrod quadrature of
/// the density against 1/(y - x), with the singular piece handled by symmetric
/// pairing of nodes around x. Throws NoConvergence when the estimated error
/// exceeds tol.
TransformValue hilbert_quadrature_oracle(const PiecewiseMeasure& mu, const Rational& x, double tol);

/// Fast repeated evaluation of the Hilbert transform of one atom-free or atomic
/// measure in double(-double) arithmetic.
///
/// Breakpoints become log charges: H(x) = sum_t c_t log|t - x| + sum m/(z - x),
/// with c_t the density jump (left minus right) at t. A balanced binary tree
/// over the charges stores scaled multipole moments; clusters with
/// radius/distance <= 1/2 are summed by a truncated expansion, the rest
/// directly with double-double distances. Every value carries a rigorous-ish
/// error bound (expansion tail plus rounding estimate).
class HilbertField {
 public:
  struct Value {
    double value = 0.0;
    double error_bound = 0.0;
    TransformKind kind = TransformKind::Finite;
  };

  explicit HilbertField(const PiecewiseMeasure& mu);

  Value at(const Rational& x) const;
  Value at(detail::DD x) const { return at(detail::Point{x, 0.0}); }
  Value at(const detail::Point& x) const;
  /// base + offset, with base exact (typically a piece endpoint).
  Value at_offset(const Rational& base, double offset) const;

  size_t charge_count() const noexcept { return pos_.size(); }

 private:
  struct Node {
    size_t begin, end;
    int left = -1, right = -1;
    double center = 0.0, radius = 0.0, abs_charge = 0.0;
    std::vector<double> moments;
  };

  int build(size_t begin, size_t end);

  std::vector<detail::DD> pos_;
  std::vector<double> charge_;
  std::vector<detail::DD> atom_pos_;
  std::vector<double> atom_mass_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace weightlab
