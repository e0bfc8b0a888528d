#include "weightlab/verify.hpp"

#include "verify_common.hpp"

#include "weightlab/cantor.hpp"
#include "weightlab/maximal.hpp"

#include <algorithm>
#include <cmath>

namespace weightlab {

using verify_detail::label;

namespace {

constexpr double kEps = 0x1p-52;

struct SplitMax {
  double total = 0.0, total_err = 0.0;
  double inner = 0.0, inner_err = 0.0;
  double outer = 0.0, outer_err = 0.0;
};

/// int over `leaf` of sigma = w / (Mw)^{e}, leaf inside one piece of density d.
QuadratureResult sigma_on_leaf(const MaximalProfile& profile, const Interval& leaf, double d, double e,
                               const QuadratureOptions& qo) {
  QuadratureResult out;
  const auto& segs = profile.segments();
  for (size_t idx = profile.locate(leaf.a()); idx < segs.size() && segs[idx].lo < leaf.b(); ++idx) {
    const Rational& lo = std::max(segs[idx].lo, leaf.a());
    const Rational& hi = std::min(segs[idx].hi, leaf.b());
    if (!(lo < hi)) continue;
    const PointFunction g = [&](const detail::Point& x) { return std::pow(profile.value_in(idx, x), -e); };
    QuadratureResult r = integrate_smooth(g, lo, hi, qo);
    r.value *= d;
    r.error_bound *= d;
    out += r;
  }
  return out;
}

}  // namespace

VerificationReport linearization_testing(const PiecewiseMeasure& w, const std::vector<Rational>& ps,
                                         const std::vector<GridKind>& grids, const std::vector<Interval>& q_family,
                                         const VerifyOptions& o) {
  VerificationReport rep;
  rep.check_name = "linearization";
  nlohmann::json plist = nlohmann::json::array(), glist = nlohmann::json::array();
  for (const Rational& p : ps) plist.push_back(label(p));
  for (GridKind g : grids) glist.push_back(std::string(to_string(g)));
  rep.parameters = {{"p", plist},          {"grids", glist},   {"j_min", o.grid.j_min},
                    {"j_max", o.grid.j_max}, {"q_family_size", q_family.size()}, {"random_q", o.random_q},
                    {"seed", o.seed},      {"quadrature_tol", o.quad_tol}};
  if (w.has_atoms()) fail(ErrorCode::AtomicPart, "linearization testing needs an atom-free weight");

  std::vector<double> es;
  for (const Rational& p : ps) {
    const Rational dual = verify_detail::dual_exponent(p);
    es.push_back(to_double(dual));
    // sum_{j >= 0} 2^{-j p'} = 1 / (1 - 2^{-p'}) <= 2  iff  p' >= 1
    const std::string name = "p=" + label(p) + " dual exponent p'";
    rep.add_exact(name, dual);
    rep.require_exact("p=" + label(p) + " geometric tail <= 2 (p' >= 1)", name, Relation::GreaterEqual, 1,
                      {{"p", label(p)}});
    const std::string tail = "p=" + label(p) + " geometric tail sum";
    rep.add_value(tail, 1.0 / (1.0 - std::exp2(-es.back())), Provenance::Exact);
    rep.inform(tail + " <= 2", tail, Relation::LessEqual, 2.0, {{"p", label(p)}});
  }

  const MaximalProfile profile(w);
  const QuadratureOptions qo{o.quad_tol};
  Rational violations = 0;
  size_t leaves = 0, nodes = 0, tested = 0;
  for (GridKind kind : grids) {
    GridFamily family = o.grid;
    family.kind = kind;
    std::vector<SplitMax> worst(ps.size());
    for (const Interval& q : q_family) {
      const Rational wq = w.measure_of(q);
      if (wq == 0) continue;
      ++tested;
      const LinearizationMap map = linearize_maximal(w, q, family);
      nodes += map.nodes_visited;
      leaves += map.leaves.size();
      const double wqd = to_double(wq);
      std::vector<double> inner(ps.size(), 0.0), outer(ps.size(), 0.0), inner_err(ps.size(), 0.0),
          outer_err(ps.size(), 0.0);
      const LinearizationMap::Leaf* best = nullptr;
      for (const LinearizationMap::Leaf& leaf : map.leaves) {
        const auto& holder = map.assignments[leaf.assignment];
        if (holder.average == 0) continue;
        if (best == nullptr || holder.average > map.assignments[best->assignment].average) best = &leaf;
        const double avg = to_double(holder.average);
        for (size_t i = 0; i < es.size(); ++i) {
          double s = 0.0, s_err = 0.0;
          if (leaf.straddles) {
            // sigma <= w^{1 - p'} since Mw >= w
            const PiecewiseMeasure part = w.restricted(leaf.piece);
            for (const Piece& piece : part.pieces()) {
              s += std::pow(to_double(piece.density), 1.0 - es[i]) * to_double(piece.interval.length());
            }
            s_err = 8 * kEps * s;
          } else {
            const Rational d = w.density_at(leaf.piece.a());
            if (d == 0) continue;
            const QuadratureResult r = sigma_on_leaf(profile, leaf.piece, to_double(d), es[i], qo);
            s = r.value;
            s_err = r.error_bound;
          }
          const double f = std::pow(avg, es[i]);
          (holder.contains_q ? outer : inner)[i] += f * s;
          (holder.contains_q ? outer_err : inner_err)[i] += f * s_err + 4 * kEps * f * s;
        }
      }
      // L(1_Q w) <= M(1_Q w) at the leaf with the largest average
      if (best != nullptr) {
        const Rational x = best->piece.center();
        if (map.assignments[best->assignment].average > maximal_exact(w.restricted(q), x)) violations += 1;
      }
      for (size_t i = 0; i < es.size(); ++i) {
        SplitMax& m = worst[i];
        const double t = (inner[i] + outer[i]) / wqd, te = (inner_err[i] + outer_err[i]) / wqd;
        if (t + te > m.total + m.total_err) m.total = t, m.total_err = te;
        if ((inner[i] + inner_err[i]) / wqd > m.inner + m.inner_err) m.inner = inner[i] / wqd, m.inner_err = inner_err[i] / wqd;
        if ((outer[i] + outer_err[i]) / wqd > m.outer + m.outer_err) m.outer = outer[i] / wqd, m.outer_err = outer_err[i] / wqd;
      }
    }
    for (size_t i = 0; i < ps.size(); ++i) {
      const std::string key = std::string(to_string(kind)) + " p=" + label(ps[i]);
      const nlohmann::json tags = {{"p", label(ps[i])}, {"grid", std::string(to_string(kind))}};
      rep.add_value(key + " max total / w(Q)", worst[i].total, Provenance::Quadrature, worst[i].total_err);
      rep.add_value(key + " max inner split / w(Q)", worst[i].inner, Provenance::Quadrature, worst[i].inner_err);
      rep.add_value(key + " max outer split / w(Q)", worst[i].outer, Provenance::Quadrature, worst[i].outer_err);
      rep.require(key + " total <= 3 w(Q)", key + " max total / w(Q)", Relation::LessEqual, 3.0, o.tol, tags);
      rep.require(key + " inner split <= w(Q)", key + " max inner split / w(Q)", Relation::LessEqual, 1.0, o.tol,
                  tags);
      rep.require(key + " outer split <= 2 w(Q)", key + " max outer split / w(Q)", Relation::LessEqual, 2.0, o.tol,
                  tags);
    }
  }
  rep.parameters["q_tested"] = tested;
  rep.parameters["leaves"] = leaves;
  rep.parameters["nodes_visited"] = nodes;
  rep.add_exact("L > M violations", violations);
  rep.require_exact("L(1_Q w) <= M(1_Q w)", "L > M violations", Relation::Equal, 0);
  rep.notes.push_back("inner split: holders not containing Q; outer split: holders containing Q");
  rep.notes.push_back("straddling finest-scale leaves use the upper bound sigma <= w^(1-p')");
  return rep;
}

VerificationReport theorem6_check(int r, int T, int R) {
  VerificationReport rep;
  rep.check_name = "theorem6";
  rep.parameters = {{"r", r}, {"T", T}, {"R", R}};
  CantorBlocks blocks;
  try {
    blocks = theorem6_blocks(r, T, R);
  } catch (const Error& e) {
    rep.record_error(e);
    return rep;
  }
  const Rational floor_value = pow2(-r);
  for (size_t i = 0; i < blocks.blocks.size(); ++i) {
    const CantorBlock& b = blocks.blocks[i];
    const std::string key = "block " + std::to_string(b.index);
    const nlohmann::json tags = {{"T", b.index}};
    rep.add_exact(key + " value", b.value);
    rep.add_exact(key + " certified", b.certified);
    rep.add_exact(key + " witnesses ok", b.witnesses_ok ? 1 : 0);
    rep.add_exact(key + " min atom M / (3/2)^level", b.min_atom_maximal / pow(Rational(3, 2), b.level));
    rep.add_bound(key + " lower bound", b.certified, true);
    rep.require_exact(key + " certified >= 2^-r", key + " certified", Relation::GreaterEqual, floor_value, tags);
    rep.require_exact(key + " value >= 2^-r", key + " value", Relation::GreaterEqual, floor_value, tags);
    rep.require_exact(key + " witnesses in gaps", key + " witnesses ok", Relation::Equal, 1, tags);
    rep.require_exact(key + " per-atom M >= (3/2)^level", key + " min atom M / (3/2)^level",
                      Relation::GreaterEqual, 1, tags);
  }
  for (size_t t = 0; t < blocks.partial_sums.size(); ++t) {
    const std::string key = "partial sum T=" + std::to_string(t);
    const nlohmann::json tags = {{"T", t}};
    const Rational target = floor_value * static_cast<long>(t + 1);
    rep.add_exact(key, blocks.partial_sums[t]);
    rep.add_exact("certified " + key, blocks.certified_partial_sums[t]);
    rep.require_exact(key + " >= (T+1) 2^-r", key, Relation::GreaterEqual, target, tags);
    rep.require_exact("certified " + key + " >= (T+1) 2^-r", "certified " + key, Relation::GreaterEqual, target,
                      tags);
  }
  return rep;
}

}  // namespace weightlab
