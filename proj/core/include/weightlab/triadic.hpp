#pragma once

#include "weightlab/measure.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <string_view>
#include <vector>

namespace weightlab {

enum class SignRule { Greedy, AllPlus, AllMinus };

std::string_view to_string(SignRule rule) noexcept;
SignRule parse_sign_rule(std::string_view text);

/// One J = K^m of the construction with its residual interval I(J).
struct ResidualRecord {
  Interval j;
  Interval residual;
  int sign = 1;        // +1: rep(I(J)) = lep(J); -1: lep(I(J)) = rep(J)
  int generation = 0;  // index i of the cell K in K_i with J = K^m

  /// The triadic cell K with K^m = J.
  Interval parent_cell() const;
  Interval residual_middle() const { return residual.middle_third(); }
};

/// Generations of the triadic construction: generations[i] lists J = K^m
/// for K in K_i, left to right.
struct TriadicTree {
  int k = 1;
  int depth = 0;
  SignRule rule = SignRule::Greedy;
  std::vector<std::vector<ResidualRecord>> generations;

  /// |K| for K in K_i, 3^{-ik}.
  Rational cell_length(int i) const { return pow3(-static_cast<long>(i) * k); }
  /// |I(J)| for J at generation i, 3^{-(i+1)k}.
  Rational residual_length(int i) const { return pow3(-static_cast<long>(i + 1) * k); }
  size_t residual_count() const;

  friend bool operator==(const TriadicTree& x, const TriadicTree& y);
};

bool operator==(const ResidualRecord& x, const ResidualRecord& y);

struct Construction {
  TriadicTree tree;
  PiecewiseMeasure measure;             // w_k^depth
  std::vector<Rational> cell_mass;      // mass of each K in K_i
  std::vector<Rational> block_density;  // density on K^m u I(K^m), K in K_i
};

/// Default cap on the number of residual intervals.
inline constexpr double kDefaultResidualCap = 1e6;

/// sum_{i<=depth} 3^{(k-1)i}, as a double so it cannot overflow.
double residual_count_estimate(int k, int depth);

/// Stage-`depth` measure of the triadic construction together with its tree.
/// Throws SizeLimit when the residual count would exceed `cap`.
Construction build_w_k(int k, int depth, SignRule rule, double cap = kDefaultResidualCap);
TriadicTree build_tree(int k, int depth, SignRule rule, double cap = kDefaultResidualCap);

/// Sign for J given the measure fixed so far: +1 when H(previous)(center J)
/// is >= 0 (ties within the evaluation error count as 0).
int select_sign(const PiecewiseMeasure& previous_stage, const Interval& j);

struct ResidualSupport {
  Interval j;
  Interval residual;
  Interval residual_middle;
  int generation;
};
std::vector<ResidualSupport> residual_supports(const TriadicTree& tree);

/// Lower-bound statistics of |H mu(x)| / mu(x) on the middle thirds of the
/// residual intervals.
struct HilbertRatioReport {
  int k = 0;
  size_t samples_per_interval = 0;
  double global_min = 0.0;
  double global_min_over_k = 0.0;
  std::vector<double> generation_min;
  std::vector<double> residual_min;  // aligned with residual_supports(tree)
  double max_error_bound = 0.0;
  size_t evaluations = 0;
};

HilbertRatioReport hilbert_ratio_on_residuals(const TriadicTree& tree, const PiecewiseMeasure& mu,
                                              size_t samples_per_interval);

/// Evenly spaced interior sample points (s + 1/2) |I| / n.
std::vector<Rational> interior_samples(const Interval& interval, size_t n);

nlohmann::json tree_to_json(const TriadicTree& tree);

}  // namespace weightlab
