#pragma once

#include "weightlab/grids.hpp"
#include "weightlab/measure.hpp"
#include "weightlab/report.hpp"
#include "weightlab/triadic.hpp"

#include <cstdint>
#include <vector>

namespace weightlab {

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  double tol = 1e-6;           // relative slack on upper-bound thresholds
  double quad_tol = 1e-9;      // relative quadrature tolerance per piece
  size_t samples = 64;         // exact sample points per residual interval
  size_t hilbert_samples = 16; // sample points per residual middle third
  size_t random_q = 200;
  SignRule rule = SignRule::Greedy;
  double residual_cap = kDefaultResidualCap;
  GridFamily grid;             // scale window for linearization
};

/// Triadic intervals [n 3^-j, (n+1) 3^-j) with positive w-mass, from the
/// coarsest level whose intervals cover the support hull down to max_level,
/// followed by `random_count` seeded random intervals with dyadic endpoints
/// around the hull (log-uniform lengths).
std::vector<Interval> default_q_family(const PiecewiseMeasure& w, int max_level, size_t random_count,
                                       std::uint64_t seed);

/// Sum of w_k translated by 3^k, k = 1..K.
PiecewiseMeasure translated_sum(int K, int depth, SignRule rule = SignRule::Greedy,
                                double cap = kDefaultResidualCap);

VerificationReport check_contmax(int k, int depth, const VerifyOptions& options = {});

/// Minimum of |H w_k| / w_k on residual-middle samples for each k, positivity
/// and strict increase between consecutive k.
VerificationReport check_hlower(const std::vector<int>& ks, int depth, const VerifyOptions& options = {});

VerificationReport check_prop_unbddH1(const std::vector<int>& ks, const std::vector<Rational>& ps, int depth,
                                      const VerifyOptions& options = {});

/// `dual_ps` are the exponents p' of the dual weight sigma = w / (M w)^{p'}.
VerificationReport check_prop_unbddH2(const std::vector<int>& ks, const std::vector<Rational>& dual_ps, int depth,
                                      const VerifyOptions& options = {});

/// sup over Q of int_Q M(sigma 1_Q)^p d(weight) / sigma(Q) against `bound`.
/// Requires the weight's support inside Q to lie within the support hull of sigma 1_Q.
VerificationReport sawyer_testing(const PiecewiseMeasure& sigma, const PiecewiseMeasure& weight, const Rational& p,
                                  const std::vector<Interval>& q_family, double bound,
                                  const VerifyOptions& options = {});

/// Sawyer testing for the pair (w, w^{1-p}) with bound 13^p.
VerificationReport sawyer_testing(const PiecewiseMeasure& w, const Rational& p, const std::vector<Interval>& q_family,
                                  const VerifyOptions& options = {});

VerificationReport linearization_testing(const PiecewiseMeasure& w, const std::vector<Rational>& ps,
                                         const std::vector<GridKind>& grids, const std::vector<Interval>& q_family,
                                         const VerifyOptions& options = {});

/// Throws InvalidArgument "epsilon out of range" unless 1/p < eps < 1.
VerificationReport gliding_hump_partial(const Rational& p, double eps, int K_max, int depth,
                                        const VerifyOptions& options = {});

VerificationReport theorem6_check(int r, int T, int R);

/// contmax, hlower, prop41, prop51, sawyer (w_k and the K = 3 translated sum),
/// linearization on both grids, gliding (p, eps = 3/4 or the smallest admissible
/// default, K_max = 4, depth 1) and theorem6 (r = 1, T = 2, R = 11).
ReportSet verify_all(int k, const Rational& p, int depth, const VerifyOptions& options = {});

}  // namespace weightlab
