#pragma once

#include "weightlab/measure.hpp"

#include <vector>

namespace weightlab {

/// I^r_l, l = 1..2^r, left to right (closed intervals, stored by endpoints).
Interval cantor_interval(int r, long l);
/// Open middle third G^r_l = (a^r_l, b^r_l) of I^r_l.
Interval cantor_gap(int r, long l);

inline constexpr int kDefaultCantorLevelCap = 24;

/// gamma_R: density (3/2)^R on each I^R_l. Throws SizeLimit beyond 2^cap pieces.
PiecewiseMeasure cantor_measure_approx(int R, int level_cap = kDefaultCantorLevelCap);

struct ZeroEstimate {
  int r = 0;
  long l = 1;
  Rational lo, hi;   // sign-change bracket inside G^r_l
  Rational point;    // bracket midpoint, used as the atom position
  double estimate = 0.0;
  int levels_used = 0;   // R of the accepted approximation
  int direction = 0;     // +1 if sampled H increases across the gap, -1 if it decreases, 0 otherwise
  bool exact_zero = false;
};

struct FindZeroOptions {
  int r_start = 10;  // first approximation level (raised to r + 2 when smaller)
  int r_limit = 22;
  int samples = 16;
};

/// Zero of H(gamma_R) in G^r_l by exact-midpoint bisection for one fixed R.
/// Throws MonotonicityViolation if the sampled signs do not change exactly once.
ZeroEstimate find_zero_at(int r, long l, int R, double tol, int samples = 16);

/// Zero of H(gamma) in G^r_l: find_zero_at for R = r_start, r_start + 2, ...
/// until two successive estimates agree within tol. Throws NoConvergence.
ZeroEstimate find_zero(int r, long l, double tol, const FindZeroOptions& options = {});

struct LambdaMeasure {
  std::vector<ZeroEstimate> zeros;
  PiecewiseMeasure measure;  // atoms (zeta^r_l, (2/9)^r)
};

LambdaMeasure build_lambda(int r_max, double tol, const FindZeroOptions& options = {});

struct CantorBlock {
  int index = 0;          // i
  int level = 0;          // r + 4i
  size_t atoms = 0;       // 2^{4i}
  Rational value;         // sum_s M(1_{I^r_1} gamma_R)(zeta)^2 p^{r+4i}, exact at the zero estimates
  Rational certified;     // same sum with the witness averages (3/2)^{r+4i}
  Rational min_atom_maximal;  // smallest M value over the block's atoms
  bool witnesses_ok = true;   // every estimate lies in its gap and M >= witness average
};

struct CantorBlocks {
  int r = 0, T = 0, R = 0;
  std::vector<CantorBlock> blocks;
  std::vector<Rational> partial_sums;            // of the computed values
  std::vector<Rational> certified_partial_sums;  // of the certified bounds
};

/// Per-block lower bounds for the integral of M(1_{I^r_1} gamma)^2 against lambda.
CantorBlocks theorem6_blocks(int r, int T, int R, size_t atom_cap = size_t(1) << 20);

}  // namespace weightlab
