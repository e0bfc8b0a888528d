#include "weightlab/maximal.hpp"

#include "weightlab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace weightlab {

namespace {

struct Vertex {
  Rational t;
  Rational f;  // cumulative mass at t
};

/// Breakpoints of mu with the cumulative mass at each.
std::vector<Vertex> mass_graph(const PiecewiseMeasure& mu) {
  std::vector<Vertex> out;
  Rational acc = 0;
  for (const Piece& p : mu.pieces()) {
    if (out.empty() || out.back().t != p.interval.a()) out.push_back({p.interval.a(), acc});
    acc += p.density * p.interval.length();
    out.push_back({p.interval.b(), acc});
  }
  return out;
}

void require_atom_free(const PiecewiseMeasure& mu) {
  if (mu.has_atoms()) fail(ErrorCode::AtomicPart, "maximal function of a measure with atoms is unbounded");
}

}  // namespace

Rational maximal_exact(const PiecewiseMeasure& mu, const Rational& x) {
  require_atom_free(mu);
  const std::vector<Vertex> graph = mass_graph(mu);
  const Rational fx = mu.cdf(x);
  Rational best = 0;
  for (const Vertex& v : graph) {
    if (v.t == x) continue;
    const Rational avg = (fx - v.f) / (x - v.t);
    if (avg > best) best = avg;
  }
  return best;
}

Rational maximal_grid_oracle(const PiecewiseMeasure& mu, const Rational& x, int n) {
  require_atom_free(mu);
  if (n < 2) fail(ErrorCode::InvalidArgument, "grid oracle needs n >= 2");
  const auto bounds = mu.support_bounds();
  if (!bounds) return 0;
  const Rational lo = std::min(bounds->first, x);
  const Rational hi = std::max(bounds->second, x);
  const Rational h = (hi - lo) / n;

  std::vector<Rational> grid;
  grid.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) grid.push_back(lo + h * i);
  grid.push_back(x);
  for (const Rational& b : mu.breakpoints()) {
    Rational step = h / 2;
    for (int j = 0; j < 40; ++j, step /= 2) {
      grid.push_back(b - step);
      grid.push_back(b + step);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<long double> pos, mass;
  pos.reserve(grid.size());
  mass.reserve(grid.size());
  for (const Rational& g : grid) {
    pos.push_back(g.convert_to<long double>());
    mass.push_back(mu.cdf(g).convert_to<long double>());
  }
  const size_t split = static_cast<size_t>(std::lower_bound(grid.begin(), grid.end(), x) - grid.begin());
  long double best = -1;
  size_t bl = split, br = split;
  for (size_t l = 0; l <= split; ++l) {
    for (size_t r = split; r < grid.size(); ++r) {
      if (r == l) continue;
      const long double avg = (mass[r] - mass[l]) / (pos[r] - pos[l]);
      if (avg > best) {
        best = avg;
        bl = l;
        br = r;
      }
    }
  }
  if (bl == br) return 0;
  return mu.measure_of(Interval(grid[bl], grid[br])) / (grid[br] - grid[bl]);
}

namespace {

struct Piecewise {
  Rational lo, hi, d, c, v;
};

/// One-sided profile L(x) = sup_{t < x} (F(x) - F(t)) / (x - t) on the support
/// hull, as segments d + c / (x - v) with v < x (c = 0 for the density limit).
class LeftSweep {
 public:
  explicit LeftSweep(const std::vector<Vertex>& graph, const std::vector<Rational>& density)
      : graph_(graph), density_(density) {}

  std::vector<Piecewise> run() {
    for (size_t i = 0; i + 1 < graph_.size(); ++i) {
      push(i);
      cell_ = i;
      const Rational& a = graph_[i].t;
      const Rational& b = graph_[i + 1].t;
      const size_t u = argmax_at_left_end();
      const size_t w = argmax(b);
      solve(a, b, u, w);
    }
    return std::move(out_);
  }

 private:
  void push(size_t i) {
    while (hull_.size() >= 2) {
      const Vertex& p = graph_[hull_[hull_.size() - 2]];
      const Vertex& q = graph_[hull_.back()];
      const Vertex& r = graph_[i];
      // keep q only if it lies strictly below the chord p r
      if ((q.f - p.f) * (r.t - p.t) < (r.f - p.f) * (q.t - p.t)) break;
      hull_.pop_back();
    }
    hull_.push_back(i);
  }

  /// c for hull vertex j in the current cell.
  Rational coefficient(size_t j) const {
    const Vertex& base = graph_[cell_];
    const Vertex& v = graph_[j];
    return base.f - v.f - density_[cell_] * (base.t - v.t);
  }

  /// phi_j(x) = c_j / (x - t_j); the cell's own left end contributes 0.
  Rational phi(size_t j, const Rational& x) const {
    if (j == cell_) return 0;
    return coefficient(j) / (x - graph_[j].t);
  }

  size_t argmax_at_left_end() const {
    if (hull_.size() < 2) return cell_;
    const size_t prev = hull_[hull_.size() - 2];
    return coefficient(prev) > 0 ? prev : cell_;
  }

  /// Hull vertex maximizing the slope to (x, F(x)) for x strictly inside or
  /// at the right end of the current cell. Slopes along the hull are unimodal.
  size_t argmax(const Rational& x) const {
    const Vertex& base = graph_[cell_];
    const Rational fx = base.f + density_[cell_] * (x - base.t);
    auto better_next = [&](size_t pos) {
      const Vertex& p = graph_[hull_[pos]];
      const Vertex& q = graph_[hull_[pos + 1]];
      // slope(p) < slope(q) with positive denominators x - t
      return (fx - p.f) * (x - q.t) < (fx - q.f) * (x - p.t);
    };
    size_t lo = 0, hi = hull_.size() - 1;
    while (lo < hi) {
      const size_t mid = lo + (hi - lo) / 2;
      if (better_next(mid)) lo = mid + 1;
      else hi = mid;
    }
    return hull_[lo];
  }

  void emit(const Rational& lo, const Rational& hi, size_t j) {
    if (!(lo < hi)) return;
    if (j == cell_) out_.push_back({lo, hi, density_[cell_], Rational(0), graph_[cell_].t});
    else out_.push_back({lo, hi, density_[cell_], coefficient(j), graph_[j].t});
  }

  void solve(const Rational& lo, const Rational& hi, size_t u, size_t w) {
    if (u == w) {
      emit(lo, hi, u);
      return;
    }
    const Rational cu = u == cell_ ? Rational(0) : coefficient(u);
    const Rational cw = w == cell_ ? Rational(0) : coefficient(w);
    if (cu == cw) {
      emit(lo, hi, u);
      return;
    }
    const Rational& tu = graph_[u].t;
    const Rational& tw = graph_[w].t;
    Rational cross = (cu * tw - cw * tu) / (cu - cw);
    if (cross < lo) cross = lo;
    if (cross > hi) cross = hi;
    if (cross == lo || cross == hi) {
      // the other vertex is already optimal over the whole range
      emit(lo, hi, cross == lo ? w : u);
      return;
    }
    const size_t m = argmax(cross);
    const Rational best = phi(m, cross);
    if (best <= phi(u, cross)) {
      emit(lo, cross, u);
      emit(cross, hi, w);
      return;
    }
    solve(lo, cross, u, m);
    solve(cross, hi, m, w);
  }

  const std::vector<Vertex>& graph_;
  const std::vector<Rational>& density_;
  std::vector<size_t> hull_;
  size_t cell_ = 0;
  std::vector<Piecewise> out_;
};

std::vector<Rational> cell_densities(const PiecewiseMeasure& mu, const std::vector<Vertex>& graph) {
  std::vector<Rational> d(graph.empty() ? 0 : graph.size() - 1, Rational(0));
  size_t cell = 0;
  for (const Piece& p : mu.pieces()) {
    while (graph[cell].t != p.interval.a()) ++cell;
    d[cell] = p.density;
  }
  return d;
}

std::vector<Piecewise> left_profile(const PiecewiseMeasure& mu) {
  const std::vector<Vertex> graph = mass_graph(mu);
  const std::vector<Rational> density = cell_densities(mu, graph);
  return LeftSweep(graph, density).run();
}

/// phi on a one-sided segment: c / |x - v|, zero when c = 0.
Rational side_value(const Piecewise& s, const Rational& x) {
  if (s.c == 0) return 0;
  return s.c / abs(x - s.v);
}

}  // namespace

MaximalProfile::MaximalProfile(const PiecewiseMeasure& mu) : mu_(mu) {
  require_atom_free(mu_);
  if (mu_.empty()) return;
  const std::vector<Piecewise> left = left_profile(mu_);
  std::vector<Piecewise> right = left_profile(mu_.reflected());
  for (Piecewise& s : right) {
    Rational lo = -s.hi;
    s.hi = -s.lo;
    s.lo = std::move(lo);
    s.v = -s.v;
  }
  std::reverse(right.begin(), right.end());

  auto push = [&](const Rational& lo, const Rational& hi, const Piecewise& s) {
    if (!(lo < hi)) return;
    if (!segments_.empty()) {
      Segment& last = segments_.back();
      if (last.hi == lo && last.d == s.d && last.c == s.c && (s.c == 0 || last.v == s.v)) {
        last.hi = hi;
        return;
      }
    }
    Segment seg{lo, hi, s.d, s.c, s.v, detail::to_dd(s.v), to_double(s.d), to_double(s.c)};
    segments_.push_back(std::move(seg));
  };

  size_t i = 0, j = 0;
  while (i < left.size() && j < right.size()) {
    const Piecewise& l = left[i];
    const Piecewise& r = right[j];
    const Rational& lo = std::max(l.lo, r.lo);
    const Rational& hi = std::min(l.hi, r.hi);
    if (lo < hi) {
      // left part decreases in x, right part increases
      if (side_value(l, hi) >= side_value(r, hi)) {
        push(lo, hi, l);
      } else if (side_value(r, lo) >= side_value(l, lo)) {
        push(lo, hi, r);
      } else {
        const Rational cross = (l.c * r.v + r.c * l.v) / (l.c + r.c);
        push(lo, cross, l);
        push(cross, hi, r);
      }
    }
    if (l.hi == hi) ++i;
    if (r.hi == hi) ++j;
  }
  lo_double_.reserve(segments_.size());
  for (const Segment& s : segments_) lo_double_.push_back(to_double(s.lo));
}

size_t MaximalProfile::locate(const Rational& x) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), x,
                             [](const Rational& v, const Segment& s) { return v < s.lo; });
  if (it == segments_.begin()) return 0;
  return static_cast<size_t>(it - segments_.begin()) - 1;
}

Rational MaximalProfile::value_in(size_t segment, const Rational& x) const {
  const Segment& s = segments_[segment];
  if (s.c == 0) return s.d;
  return s.d + s.c / abs(x - s.v);
}

double MaximalProfile::value_in(size_t segment, const detail::Point& x) const {
  const Segment& s = segments_[segment];
  if (s.c == 0) return s.d_double;
  return s.d_double + s.c_double / std::abs(detail::distance(s.v_dd, x));
}

Rational MaximalProfile::value_at(const Rational& x) const {
  if (segments_.empty() || x < segments_.front().lo || x > segments_.back().hi) return maximal_exact(mu_, x);
  const size_t idx = locate(x);
  Rational v = value_in(idx, x);
  if (idx > 0 && segments_[idx].lo == x) v = std::max(v, value_in(idx - 1, x));
  return v;
}

double MaximalProfile::value_at(const detail::Point& x) const {
  if (segments_.empty()) return 0.0;
  auto it = std::upper_bound(lo_double_.begin(), lo_double_.end(), x.base.hi + x.offset);
  const size_t idx = it == lo_double_.begin() ? 0 : static_cast<size_t>(it - lo_double_.begin()) - 1;
  return value_in(idx, x);
}

}  // namespace weightlab
