#include "weightlab/triadic.hpp"

#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace weightlab {

std::string_view to_string(SignRule rule) noexcept {
  switch (rule) {
    case SignRule::Greedy: return "greedy";
    case SignRule::AllPlus: return "all-plus";
    case SignRule::AllMinus: return "all-minus";
  }
  return "greedy";
}

SignRule parse_sign_rule(std::string_view text) {
  if (text == "greedy") return SignRule::Greedy;
  if (text == "all-plus") return SignRule::AllPlus;
  if (text == "all-minus") return SignRule::AllMinus;
  fail(ErrorCode::InvalidArgument, "unknown sign rule '" + std::string(text) + "'");
}

Interval ResidualRecord::parent_cell() const {
  const Rational len = j.length();
  return {j.a() - len, j.b() + len};
}

bool operator==(const ResidualRecord& x, const ResidualRecord& y) {
  return x.j == y.j && x.residual == y.residual && x.sign == y.sign && x.generation == y.generation;
}

bool operator==(const TriadicTree& x, const TriadicTree& y) {
  return x.k == y.k && x.depth == y.depth && x.rule == y.rule && x.generations == y.generations;
}

size_t TriadicTree::residual_count() const {
  size_t n = 0;
  for (const auto& g : generations) n += g.size();
  return n;
}

double residual_count_estimate(int k, int depth) {
  double total = 0.0;
  for (int i = 0; i <= depth; ++i) total += std::pow(3.0, static_cast<double>(k - 1) * i);
  return total;
}

namespace {

Interval residual_for(const Interval& j, int sign, const Rational& length) {
  if (sign > 0) return {j.a() - length, j.a()};
  return {j.b(), j.b() + length};
}

/// Stage measure: frozen residuals of generations < stage plus uniform blocks
/// J u I(J) of generation `stage`.
PiecewiseMeasure stage_measure(const TriadicTree& tree, const std::vector<Rational>& density, int stage) {
  std::vector<Piece> pieces;
  for (int i = 0; i < stage; ++i) {
    for (const ResidualRecord& r : tree.generations[i]) pieces.push_back({r.residual, density[i]});
  }
  for (const ResidualRecord& r : tree.generations[stage]) {
    pieces.push_back({r.j, density[stage]});
    pieces.push_back({r.residual, density[stage]});
  }
  return PiecewiseMeasure(std::move(pieces));
}

int sign_from_value(double v, double err) {
  if (std::abs(v) <= err) return 0;
  return v > 0 ? 1 : -1;
}

int greedy_sign(const HilbertField* field, const PiecewiseMeasure* previous, const Interval& j) {
  if (previous == nullptr || previous->empty()) return 1;
  const Rational c = j.center();
  const HilbertField::Value fast = field->at(c);
  int s = fast.kind == TransformKind::Finite ? sign_from_value(fast.value, fast.error_bound) : 0;
  if (s == 0) {
    const TransformValue exact = hilbert_exact(*previous, c);
    if (exact.kind == TransformKind::PlusInfinity) return 1;
    if (exact.kind == TransformKind::MinusInfinity) return -1;
    s = sign_from_value(exact.value.convert_to<double>(), exact.error_bound);
  }
  return s >= 0 ? 1 : -1;
}

}  // namespace

int select_sign(const PiecewiseMeasure& previous_stage, const Interval& j) {
  if (previous_stage.empty()) return 1;
  const HilbertField field(previous_stage);
  return greedy_sign(&field, &previous_stage, j);
}

Construction build_w_k(int k, int depth, SignRule rule, double cap) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "k must be >= 1");
  if (depth < 0) fail(ErrorCode::InvalidArgument, "depth must be >= 0");
  const double count = residual_count_estimate(k, depth);
  if (count > cap) {
    fail(ErrorCode::SizeLimit, "construction with k=" + std::to_string(k) + ", depth=" + std::to_string(depth) +
                                   " needs " + nlohmann::json(count).dump() +
                                   " residual intervals (cap " + nlohmann::json(cap).dump() +
                                   ")");
  }

  Construction out;
  out.tree.k = k;
  out.tree.depth = depth;
  out.tree.rule = rule;
  out.tree.generations.resize(static_cast<size_t>(depth) + 1);

  PiecewiseMeasure previous;
  for (int i = 0; i <= depth; ++i) {
    std::vector<Interval> cells;
    const Rational cell_len = out.tree.cell_length(i);
    if (i == 0) {
      cells.emplace_back(Rational(0), Rational(1));
    } else {
      const auto per_j = static_cast<size_t>(std::llround(std::pow(3.0, k - 1)));
      cells.reserve(out.tree.generations[i - 1].size() * per_j);
      for (const ResidualRecord& parent : out.tree.generations[i - 1]) {
        for (size_t n = 0; n < per_j; ++n) {
          const Rational a = parent.j.a() + cell_len * static_cast<long>(n);
          cells.emplace_back(a, a + cell_len);
        }
      }
    }
    const Rational mass = i == 0 ? Rational(1) : Rational(out.block_density[i - 1] * cell_len);
    const Rational res_len = out.tree.residual_length(i);
    out.cell_mass.push_back(mass);
    out.block_density.push_back(mass / (cell_len / 3 + res_len));

    std::optional<HilbertField> field;
    if (rule == SignRule::Greedy && !previous.empty()) field.emplace(previous);

    auto& gen = out.tree.generations[i];
    gen.reserve(cells.size());
    for (const Interval& cell : cells) {
      const Interval j = cell.middle_third();
      int sign = 1;
      switch (rule) {
        case SignRule::Greedy: sign = greedy_sign(field ? &*field : nullptr, &previous, j); break;
        case SignRule::AllPlus: sign = 1; break;
        case SignRule::AllMinus: sign = -1; break;
      }
      gen.push_back(ResidualRecord{j, residual_for(j, sign, res_len), sign, i});
    }
    previous = stage_measure(out.tree, out.block_density, i);
  }
  out.measure = std::move(previous);
  return out;
}

TriadicTree build_tree(int k, int depth, SignRule rule, double cap) {
  return build_w_k(k, depth, rule, cap).tree;
}

std::vector<ResidualSupport> residual_supports(const TriadicTree& tree) {
  std::vector<ResidualSupport> out;
  out.reserve(tree.residual_count());
  for (const auto& gen : tree.generations) {
    for (const ResidualRecord& r : gen) out.push_back({r.j, r.residual, r.residual_middle(), r.generation});
  }
  return out;
}

std::vector<Rational> interior_samples(const Interval& interval, size_t n) {
  std::vector<Rational> xs;
  xs.reserve(n);
  const Rational step = interval.length() / static_cast<long>(n);
  for (size_t s = 0; s < n; ++s) xs.push_back(interval.a() + step * Rational(2 * static_cast<long>(s) + 1, 2));
  return xs;
}

HilbertRatioReport hilbert_ratio_on_residuals(const TriadicTree& tree, const PiecewiseMeasure& mu,
                                              size_t samples_per_interval) {
  if (samples_per_interval == 0) fail(ErrorCode::InvalidArgument, "samples_per_interval must be positive");
  const HilbertField field(mu);
  HilbertRatioReport rep;
  rep.k = tree.k;
  rep.samples_per_interval = samples_per_interval;
  rep.global_min = std::numeric_limits<double>::infinity();
  rep.generation_min.assign(tree.generations.size(), std::numeric_limits<double>::infinity());
  for (const auto& gen : tree.generations) {
    for (const ResidualRecord& r : gen) {
      const Interval mid = r.residual_middle();
      const double density = to_double(mu.density_at(mid.a()));
      double local = std::numeric_limits<double>::infinity();
      for (const Rational& x : interior_samples(mid, samples_per_interval)) {
        const HilbertField::Value v = field.at(x);
        ++rep.evaluations;
        const double ratio = std::abs(v.value) / density;
        local = std::min(local, ratio);
        rep.max_error_bound = std::max(rep.max_error_bound, v.error_bound / density);
      }
      rep.residual_min.push_back(local);
      rep.generation_min[r.generation] = std::min(rep.generation_min[r.generation], local);
      rep.global_min = std::min(rep.global_min, local);
    }
  }
  rep.global_min_over_k = rep.global_min / tree.k;
  return rep;
}

nlohmann::json tree_to_json(const TriadicTree& tree) {
  nlohmann::json gens = nlohmann::json::array();
  for (size_t i = 0; i < tree.generations.size(); ++i) {
    nlohmann::json residuals = nlohmann::json::array();
    for (const ResidualRecord& r : tree.generations[i]) {
      residuals.push_back({{"J", {format_rational(r.j.a()), format_rational(r.j.b())}},
                           {"I", {format_rational(r.residual.a()), format_rational(r.residual.b())}},
                           {"sign", r.sign}});
    }
    gens.push_back({{"index", i},
                    {"cell_length", format_rational(tree.cell_length(static_cast<int>(i)))},
                    {"residual_length", format_rational(tree.residual_length(static_cast<int>(i)))},
                    {"residuals", std::move(residuals)}});
  }
  return {{"k", tree.k}, {"depth", tree.depth}, {"sign_rule", std::string(to_string(tree.rule))},
          {"generations", std::move(gens)}};
}

}  // namespace weightlab
