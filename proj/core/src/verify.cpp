#include "weightlab/verify.hpp"

#include "verify_common.hpp"

#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace weightlab {

using verify_detail::abs_powers_with_slack;
using verify_detail::kp;
using verify_detail::label;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::optional<Construction> try_build(VerificationReport& rep, int k, int depth, const VerifyOptions& o) {
  try {
    return build_w_k(k, depth, o.rule, o.residual_cap);
  } catch (const Error& e) {
    rep.record_error(e, {{"k", k}, {"depth", depth}});
    rep.notes.push_back("k=" + std::to_string(k) + " not built: " + e.what());
    return std::nullopt;
  }
}

nlohmann::json common_parameters(int depth, const VerifyOptions& o) {
  return {{"depth", depth}, {"sign_rule", std::string(to_string(o.rule))}, {"residual_cap", o.residual_cap}};
}

nlohmann::json rational_list(const std::vector<Rational>& ps) {
  nlohmann::json out = nlohmann::json::array();
  for (const Rational& p : ps) out.push_back(label(p));
  return out;
}

/// Walks the profile segments left to right for increasing x.
class ProfileCursor {
 public:
  explicit ProfileCursor(const MaximalProfile& p) : p_(p) {}

  Rational value(const Rational& x) {
    const auto& segs = p_.segments();
    if (segs.empty() || x < segs.front().lo || x > segs.back().hi) return p_.value_at(x);
    if (x < segs[i_].lo) i_ = p_.locate(x);
    while (i_ + 1 < segs.size() && segs[i_ + 1].lo <= x) ++i_;
    Rational v = p_.value_in(i_, x);
    if (i_ > 0 && segs[i_].lo == x) v = std::max(v, p_.value_in(i_ - 1, x));
    return v;
  }

 private:
  const MaximalProfile& p_;
  size_t i_ = 0;
};

}  // namespace

std::vector<Interval> default_q_family(const PiecewiseMeasure& w, int max_level, size_t random_count,
                                       std::uint64_t seed) {
  std::vector<Interval> out;
  const auto hull = w.support_bounds();
  if (!hull) return out;
  const Rational& lo = hull->first;
  const Rational& hi = hull->second;
  const Rational width = hi - lo;
  int level = 0;
  while (pow3(-level) < width) --level;
  while (level < 0 && pow3(-(level + 1)) >= width) ++level;
  for (int j = level; j <= max_level; ++j) {
    const Rational scale = pow3(j);  // intervals of length 3^{-j}
    const Rational len = pow3(-j);
    std::optional<Integer> last;
    for (const Piece& p : w.pieces()) {
      Integer n = floor(p.interval.a() * scale);
      const Rational end = p.interval.b() * scale;
      if (last && n <= *last) n = *last + 1;
      for (; Rational(n) < end; ++n) {
        out.emplace_back(Rational(n) * len, Rational(n + 1) * len);
        last = n;
      }
    }
  }
  std::mt19937_64 rng(seed);
  const double span = to_double(width);
  const double left = to_double(lo) - span / 8;
  for (size_t i = 0; i < random_count; ++i) {
    const double len = span * std::exp2(-20.0 * verify_detail::unit_double(rng()));
    const double start = left + (1.25 * span - len) * verify_detail::unit_double(rng());
    const Rational a = from_double(start);
    const Rational b = a + from_double(len);
    out.emplace_back(a, b);
  }
  return out;
}

PiecewiseMeasure translated_sum(int K, int depth, SignRule rule, double cap) {
  std::vector<PiecewiseMeasure> parts;
  for (int k = 1; k <= K; ++k) parts.push_back(build_w_k(k, depth, rule, cap).measure.translated(pow3(k)));
  return disjoint_sum(parts);
}

VerificationReport check_contmax(int k, int depth, const VerifyOptions& o) {
  VerificationReport rep;
  rep.check_name = "contmax";
  rep.parameters = common_parameters(depth, o);
  rep.parameters["k"] = k;
  rep.parameters["samples_per_interval"] = o.samples;
  auto c = try_build(rep, k, depth, o);
  if (!c) return rep;

  const MaximalProfile profile(c->measure);
  ProfileCursor cursor(profile);
  std::optional<Rational> max_ratio, min_ratio, max_middle;
  Rational argmax;
  size_t count = 0;
  const auto supports = residual_supports(c->tree);
  for (const ResidualSupport& s : supports) {
    const Rational d = c->measure.density_at(s.residual.center());
    for (const Rational& x : interior_samples(s.residual, o.samples)) {
      const Rational ratio = cursor.value(x) / d;
      ++count;
      if (!max_ratio || ratio > *max_ratio) {
        max_ratio = ratio;
        argmax = x;
      }
      if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
      if (s.residual_middle.contains(x) && (!max_middle || ratio > *max_middle)) max_middle = ratio;
    }
  }
  rep.parameters["sample_points"] = count;
  if (!max_ratio) {
    rep.notes.push_back("no residual intervals");
    return rep;
  }

  // independent route at a few seeded samples
  std::mt19937_64 rng(o.seed);
  Rational mismatches = 0;
  const size_t probes = std::min<size_t>(12, supports.size());
  for (size_t i = 0; i < probes; ++i) {
    const ResidualSupport& s = supports[rng() % supports.size()];
    const auto xs = interior_samples(s.residual, o.samples);
    const Rational& x = xs[rng() % xs.size()];
    if (maximal_exact(c->measure, x) != profile.value_at(x)) mismatches += 1;
  }

  rep.add_exact("max M/w on residuals", *max_ratio);
  rep.add_exact("min M/w on residuals", *min_ratio);
  if (max_middle) rep.add_exact("max M/w on residual middles", *max_middle);
  rep.add_exact("profile vs maximal_exact mismatches", mismatches);
  rep.add_bound("M w_k <= c w_k on samples, c", *max_ratio, false);
  rep.notes.push_back("argmax x = " + format_rational(argmax));
  rep.require_exact("max M/w <= 13", "max M/w on residuals", Relation::LessEqual, 13);
  rep.require_exact("min M/w >= 1", "min M/w on residuals", Relation::GreaterEqual, 1);
  rep.require_exact("profile agrees with maximal_exact", "profile vs maximal_exact mismatches", Relation::Equal, 0);
  if (max_middle) rep.inform("max M/w on residual middles <= 13", "max M/w on residual middles", Relation::LessEqual, 13);
  return rep;
}

VerificationReport check_hlower(const std::vector<int>& ks, int depth, const VerifyOptions& o) {
  VerificationReport rep;
  rep.check_name = "hlower";
  rep.parameters = common_parameters(depth, o);
  rep.parameters["k"] = ks;
  rep.parameters["samples_per_interval"] = o.hilbert_samples;
  std::optional<std::pair<int, double>> previous;
  for (int k : ks) {
    auto c = try_build(rep, k, depth, o);
    if (!c) {
      previous.reset();
      continue;
    }
    const HilbertRatioReport r = hilbert_ratio_on_residuals(c->tree, c->measure, o.hilbert_samples);
    const std::string key = "k=" + std::to_string(k);
    rep.add_value(key + " min |Hw|/w", r.global_min, Provenance::SampledUpper, r.max_error_bound);
    rep.add_value(key + " min |Hw|/w over k", r.global_min_over_k, Provenance::SampledUpper, r.max_error_bound / k);
    rep.require(key + " min |Hw|/w > 0", key + " min |Hw|/w", Relation::Greater, 0.0, 0.0, {{"k", k}});
    for (size_t g = 0; g < r.generation_min.size(); ++g) {
      const std::string name = key + " generation " + std::to_string(g) + " min |Hw|/w";
      rep.add_value(name, r.generation_min[g], Provenance::SampledUpper, r.max_error_bound);
      rep.inform(name + " > 0", name, Relation::Greater, 0.0, {{"k", k}, {"generation", g}});
    }
    if (previous) {
      const auto [prev_k, prev_min] = *previous;
      const std::string name = "min |Hw|/w increment k=" + std::to_string(prev_k) + "->" + std::to_string(k);
      rep.add_value(name, r.global_min - prev_min, Provenance::Sampled, 2 * r.max_error_bound);
      rep.require(name + " > 0", name, Relation::Greater, 0.0, 0.0, {{"k", k}});
    }
    previous = std::make_pair(k, r.global_min);
  }
  return rep;
}

VerificationReport check_prop_unbddH1(const std::vector<int>& ks, const std::vector<Rational>& ps, int depth,
                                      const VerifyOptions& o) {
  VerificationReport rep;
  rep.check_name = "prop41";
  rep.parameters = common_parameters(depth, o);
  rep.parameters["k"] = ks;
  rep.parameters["p"] = rational_list(ps);
  rep.parameters["samples_per_interval"] = o.hilbert_samples;
  rep.parameters["quadrature_tol"] = o.quad_tol;
  std::vector<double> es;
  for (const Rational& p : ps) es.push_back(to_double(p));
  std::vector<std::optional<std::pair<int, double>>> previous(ps.size());

  for (int k : ks) {
    auto c = try_build(rep, k, depth, o);
    if (!c) {
      for (auto& prev : previous) prev.reset();
      continue;
    }
    const PiecewiseMeasure& w = c->measure;
    const std::string key = "k=" + std::to_string(k);
    const nlohmann::json ktag = {{"k", k}};

    // int w^p w^{1-p} = int w: the densities cancel exactly
    rep.add_exact(key + " norm^p", w.total_mass());
    rep.require_exact(key + " norm^p == 1", key + " norm^p", Relation::Equal, 1, ktag);

    const auto supports = residual_supports(c->tree);
    Rational middle = 0, last_blocks = 0;
    std::vector<double> middle_mass;
    middle_mass.reserve(supports.size());
    for (const ResidualSupport& s : supports) {
      const Rational m = w.measure_of(s.residual_middle);
      middle += m;
      middle_mass.push_back(to_double(m));
      if (s.generation == depth) last_blocks += w.measure_of(s.j);
    }
    rep.add_exact(key + " middle mass", middle);
    rep.add_exact(key + " middle mass + unrefined/3", middle + last_blocks / 3);
    rep.require_exact(key + " middle mass >= 1/3", key + " middle mass", Relation::GreaterEqual, Rational(1, 3), ktag)
        .gating = false;
    rep.require_exact(key + " middle mass + unrefined/3 == 1/3", key + " middle mass + unrefined/3",
                      Relation::Equal, Rational(1, 3), ktag);

    const HilbertRatioReport ratios = hilbert_ratio_on_residuals(c->tree, w, o.hilbert_samples);
    rep.add_value(key + " min |Hw|/w", ratios.global_min, Provenance::SampledUpper, ratios.max_error_bound);

    const HilbertField field(w);
    double delta = 0.0;
    const PointFunction g = [&](const detail::Point& x) {
      const HilbertField::Value v = field.at(x);
      delta = std::max(delta, v.error_bound);
      return v.value;
    };
    std::vector<double> value(ps.size(), 0.0), error(ps.size(), 0.0);
    const QuadratureOptions qo{o.quad_tol};
    for (const Piece& piece : w.pieces()) {
      const auto parts = abs_powers_with_slack(g, piece.interval.a(), piece.interval.b(), es, delta, qo);
      const double d = to_double(piece.density);
      for (size_t i = 0; i < es.size(); ++i) {
        const double u = std::pow(d, 1.0 - es[i]);
        value[i] += u * parts[i].value;
        error[i] += u * parts[i].error_bound;
      }
    }

    for (size_t i = 0; i < ps.size(); ++i) {
      const std::string kk = kp(k, ps[i]);
      const nlohmann::json tags = {{"k", k}, {"p", label(ps[i])}};
      double lower = 0.0;
      for (size_t j = 0; j < supports.size(); ++j) lower += std::pow(ratios.residual_min[j], es[i]) * middle_mass[j];
      rep.add_value(kk + " integral |Hw|^p u", value[i], Provenance::Quadrature, error[i]);
      rep.add_value(kk + " sampled lower bound", lower, Provenance::SampledLower);
      rep.add_value(kk + " quadrature relative error", error[i] / value[i], Provenance::Quadrature);
      rep.add_value(kk + " (min ratio)^p/3", std::pow(ratios.global_min, es[i]) / 3, Provenance::SampledLower);
      rep.require(kk + " integral >= sampled lower bound", kk + " integral |Hw|^p u", Relation::GreaterEqual, lower,
                  0.0, tags);
      rep.require(kk + " quadrature relative error < 1e-4", kk + " quadrature relative error", Relation::LessEqual,
                  1e-4, 0.0, tags);
      rep.inform(kk + " integral >= (min ratio)^p/3", kk + " integral |Hw|^p u", Relation::GreaterEqual,
                 std::pow(ratios.global_min, es[i]) / 3, tags);
      if (previous[i]) {
        const std::string name = "p=" + label(ps[i]) + " lower bound increment k=" +
                                 std::to_string(previous[i]->first) + "->" + std::to_string(k);
        rep.add_value(name, lower - previous[i]->second, Provenance::Sampled);
        rep.require(name + " > 0", name, Relation::Greater, 0.0, 0.0, tags);
      }
      previous[i] = std::make_pair(k, lower);
    }
  }
  return rep;
}

VerificationReport check_prop_unbddH2(const std::vector<int>& ks, const std::vector<Rational>& dual_ps, int depth,
                                      const VerifyOptions& o) {
  VerificationReport rep;
  rep.check_name = "prop51";
  rep.parameters = common_parameters(depth, o);
  rep.parameters["k"] = ks;
  rep.parameters["p_dual"] = rational_list(dual_ps);
  rep.parameters["samples_per_interval"] = o.hilbert_samples;
  rep.parameters["quadrature_tol"] = o.quad_tol;
  std::vector<double> es;
  for (const Rational& p : dual_ps) es.push_back(to_double(p));

  for (int k : ks) {
    auto c = try_build(rep, k, depth, o);
    if (!c) continue;
    const PiecewiseMeasure& w = c->measure;
    const std::string key = "k=" + std::to_string(k);
    const nlohmann::json ktag = {{"k", k}};
    const HilbertField field(w);
    const MaximalProfile profile(w);

    // per-point |Hw|/Mw on residual middles, M exact
    const auto supports = residual_supports(c->tree);
    std::vector<double> local_min(supports.size(), kInf), middle_mass(supports.size());
    double global_min = kInf, max_field_error = 0.0;
    Rational violations = 0;
    std::optional<Rational> min_m_over_w;
    ProfileCursor cursor(profile);
    for (size_t j = 0; j < supports.size(); ++j) {
      const ResidualSupport& s = supports[j];
      const Rational d = w.density_at(s.residual_middle.center());
      middle_mass[j] = to_double(w.measure_of(s.residual_middle));
      for (const Rational& x : interior_samples(s.residual_middle, o.hilbert_samples)) {
        const Rational m = cursor.value(x);
        const HilbertField::Value h = field.at(x);
        const double md = to_double(m);
        local_min[j] = std::min(local_min[j], std::abs(h.value) / md);
        max_field_error = std::max(max_field_error, h.error_bound / md);
        if (m > 13 * d) violations += 1;
        const Rational mw = m / d;
        if (!min_m_over_w || mw < *min_m_over_w) min_m_over_w = mw;
      }
      global_min = std::min(global_min, local_min[j]);
    }
    rep.add_value(key + " min |Hw|/Mw on middles", global_min, Provenance::SampledUpper, max_field_error);
    rep.add_value(key + " min |Hw|/Mw on middles over k/21", global_min * 21 / k, Provenance::SampledUpper,
                  max_field_error * 21 / k);
    rep.inform(key + " min |Hw|/Mw >= k/21", key + " min |Hw|/Mw on middles", Relation::GreaterEqual, k / 21.0,
               ktag);
    rep.add_exact(key + " samples with Mw > 13w", violations);
    rep.require_exact(key + " |Hw|/Mw >= |Hw|/(13w) at samples", key + " samples with Mw > 13w", Relation::Equal, 0,
                      ktag);
    if (min_m_over_w) {
      rep.add_exact(key + " min Mw/w on middles", *min_m_over_w);
      rep.require_exact(key + " sigma <= w at samples", key + " min Mw/w on middles", Relation::GreaterEqual, 1,
                        ktag);
    }

    // int |Hw|^{p'} w (Mw)^{-p'}, cut at profile segment boundaries
    double delta = 0.0;
    std::vector<double> value(es.size(), 0.0), error(es.size(), 0.0);
    const QuadratureOptions qo{o.quad_tol};
    const auto& segs = profile.segments();
    for (const Piece& piece : w.pieces()) {
      const double d = to_double(piece.density);
      size_t idx = profile.locate(piece.interval.a());
      while (idx < segs.size() && segs[idx].lo < piece.interval.b()) {
        const Rational& lo = std::max(segs[idx].lo, piece.interval.a());
        const Rational& hi = std::min(segs[idx].hi, piece.interval.b());
        if (lo < hi) {
          const PointFunction g = [&](const detail::Point& x) {
            const HilbertField::Value v = field.at(x);
            const double m = profile.value_in(idx, x);
            delta = std::max(delta, v.error_bound / m);
            return v.value / m;
          };
          const auto parts = abs_powers_with_slack(g, lo, hi, es, delta, qo);
          for (size_t i = 0; i < es.size(); ++i) {
            value[i] += d * parts[i].value;
            error[i] += d * parts[i].error_bound;
          }
        }
        ++idx;
      }
    }
    for (size_t i = 0; i < es.size(); ++i) {
      const std::string kk = "k=" + std::to_string(k) + " p'=" + label(dual_ps[i]);
      const nlohmann::json tags = {{"k", k}, {"p", label(dual_ps[i])}};
      double lower = 0.0;
      for (size_t j = 0; j < supports.size(); ++j) lower += std::pow(local_min[j], es[i]) * middle_mass[j];
      const double paper = std::pow(k / 21.0, es[i]) / 3 * to_double(w.total_mass());
      rep.add_value(kk + " integral |Hw|^p' sigma", value[i], Provenance::Quadrature, error[i]);
      rep.add_value(kk + " sampled lower bound", lower, Provenance::SampledLower);
      rep.add_value(kk + " quadrature relative error", error[i] / value[i], Provenance::Quadrature);
      rep.require(kk + " integral >= sampled lower bound", kk + " integral |Hw|^p' sigma", Relation::GreaterEqual,
                  lower, 0.0, tags);
      rep.require(kk + " quadrature relative error < 1e-4", kk + " quadrature relative error", Relation::LessEqual,
                  1e-4, 0.0, tags);
      rep.inform(kk + " integral >= (k/21)^p'/3", kk + " integral |Hw|^p' sigma", Relation::GreaterEqual, paper,
                 tags);
    }
  }
  return rep;
}

ReportSet verify_all(int k, const Rational& p, int depth, const VerifyOptions& o) {
  ReportSet set;
  const Rational dual = verify_detail::dual_exponent(p);
  set.reports.push_back(check_contmax(k, depth, o));
  set.reports.push_back(check_hlower({k}, depth, o));
  set.reports.push_back(check_prop_unbddH1({k}, {p}, depth, o));
  set.reports.push_back(check_prop_unbddH2({k}, {dual}, depth, o));
  try {
    const Construction c = build_w_k(k, depth, o.rule, o.residual_cap);
    const auto qs = default_q_family(c.measure, depth * k, o.random_q, o.seed);
    for (VerificationReport rep : {sawyer_testing(c.measure, p, qs, o),
                                   linearization_testing(c.measure, {p}, {GridKind::Dyadic, GridKind::Shifted}, qs, o)}) {
      rep.parameters["k"] = k;
      rep.parameters["depth"] = depth;
      set.reports.push_back(std::move(rep));
    }
  } catch (const Error& e) {
    for (const char* name : {"sawyer", "linearization"}) {
      VerificationReport rep;
      rep.check_name = name;
      rep.parameters = {{"k", k}, {"depth", depth}};
      rep.record_error(e);
      set.reports.push_back(std::move(rep));
    }
  }
  {
    const PiecewiseMeasure w = translated_sum(3, depth, o.rule, o.residual_cap);
    const auto qs = default_q_family(w, depth * 3, o.random_q, o.seed);
    VerificationReport rep = sawyer_testing(w, p, qs, o);
    rep.check_name = "sawyer-translated";
    rep.parameters["K"] = 3;
    rep.parameters["depth"] = depth;
    set.reports.push_back(std::move(rep));
  }
  const double lower = 1.0 / to_double(p);
  const double eps = 0.75 > lower ? 0.75 : 0.5 * (lower + 1.0);
  set.reports.push_back(gliding_hump_partial(p, eps, 4, 1, o));
  set.reports.push_back(theorem6_check(1, 2, 11));
  set.sort();
  return set;
}

}  // namespace weightlab
