#include "weightlab/grids.hpp"

#include "weightlab/errors.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace weightlab {

std::string_view to_string(GridKind kind) noexcept { return kind == GridKind::Dyadic ? "dyadic" : "shifted"; }

GridKind parse_grid_kind(std::string_view text) {
  if (text == "dyadic") return GridKind::Dyadic;
  if (text == "shifted") return GridKind::Shifted;
  fail(ErrorCode::InvalidArgument, "unknown grid '" + std::string(text) + "'");
}

Rational grid_offset(GridKind kind, int j) {
  if (kind == GridKind::Dyadic) return 0;
  const Rational s = pow2(j) / 3;
  return (j % 2 == 0) ? s : Rational(-s);
}

Interval GridInterval::interval() const {
  const Rational len = pow2(j);
  const Rational a = len * Rational(n) + grid_offset(kind, j);
  return {a, a + len};
}

std::vector<GridInterval> GridInterval::children() const {
  Integer first = 2 * n;
  if (kind == GridKind::Shifted) first += (j % 2 == 0) ? 1 : -1;
  return {GridInterval{kind, j - 1, first}, GridInterval{kind, j - 1, first + 1}};
}

GridInterval GridInterval::containing(GridKind kind, int j, const Rational& x) {
  return GridInterval{kind, j, floor((x - grid_offset(kind, j)) / pow2(j))};
}

namespace {

int first_scale_at_least(const Rational& len) {
  // smallest j with 2^j >= len
  int j = 0;
  Rational p = 1;
  while (p < len) {
    p *= 2;
    ++j;
  }
  while (p / 2 >= len) {
    p /= 2;
    --j;
  }
  return j;
}

}  // namespace

CoverResult christ_cover(const Interval& interval, int j_min, int j_max) {
  for (int j = std::max(j_min, first_scale_at_least(interval.length())); j <= j_max; ++j) {
    for (GridKind kind : {GridKind::Dyadic, GridKind::Shifted}) {
      const GridInterval g = GridInterval::containing(kind, j, interval.a());
      if (g.interval().contains(interval)) return {g, pow2(j) / interval.length()};
    }
  }
  fail(ErrorCode::ScaleRange, "no grid interval within the scale window contains the interval");
}

DyadicMaximalValue dyadic_maximal(const PiecewiseMeasure& mu, const Rational& x, const GridFamily& grid, bool both) {
  if (mu.has_atoms()) fail(ErrorCode::AtomicPart, "grid maximal function of a measure with atoms");
  if (grid.j_min > grid.j_max) fail(ErrorCode::ScaleRange, "empty scale window");
  DyadicMaximalValue out{Rational(-1), Rational(0), Rational(0), GridInterval{}};
  std::vector<GridKind> kinds{grid.kind};
  if (both) kinds = {GridKind::Dyadic, GridKind::Shifted};
  for (int j = grid.j_min; j <= grid.j_max; ++j) {
    for (GridKind kind : kinds) {
      const GridInterval g = GridInterval::containing(kind, j, x);
      const Interval iv = g.interval();
      const Rational avg = mu.measure_of(iv) / iv.length();
      if (avg > out.value) {
        out.value = avg;
        out.argmax = g;
      }
    }
  }
  out.tail_bound = mu.total_mass() / pow2(grid.j_max + 1);
  out.certified = std::max(out.value, out.tail_bound);
  return out;
}

namespace {

class Linearizer {
 public:
  Linearizer(const PiecewiseMeasure& w, const Interval& q, const GridFamily& grid, LinearizationMap& out)
      : w_(w), q_(q), grid_(grid), out_(out) {
    breaks_.push_back(q.a());
    for (const Rational& b : w.breakpoints()) {
      if (q.a() < b && b < q.b()) breaks_.push_back(b);
    }
    breaks_.push_back(q.b());
  }

  void run() {
    const int j = grid_.j_max;
    const Rational len = pow2(j);
    const Rational off = grid_offset(grid_.kind, j);
    const Integer first = floor((q_.a() - off) / len);
    const Integer last = floor((q_.b() - off) / len);
    for (Integer n = first; n <= last; ++n) {
      const GridInterval g{grid_.kind, j, n};
      if (g.interval().intersects(q_)) visit(g, Rational(-1), std::nullopt);
    }
  }

 private:
  bool has_break_inside(const Interval& iv) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), iv.a());
    return it != breaks_.end() && *it < iv.b();
  }

  size_t assignment_for(const GridInterval& g, const Rational& avg) {
    auto it = index_.find(g);
    if (it != index_.end()) return it->second;
    const size_t id = out_.assignments.size();
    out_.assignments.push_back({g, avg, {}, g.interval().contains(q_)});
    index_.emplace(g, id);
    return id;
  }

  void visit(const GridInterval& g, Rational holder_avg, std::optional<GridInterval> holder) {
    ++out_.nodes_visited;
    const Interval iv = g.interval();
    const Interval part = *iv.intersection(q_);
    const Rational avg = w_.measure_of(part) / iv.length();
    if (avg > holder_avg) {
      holder_avg = avg;
      holder = g;
    }
    const bool split = has_break_inside(iv);
    if (!split || g.j <= grid_.j_min) {
      const size_t id = assignment_for(*holder, holder_avg);
      out_.leaves.push_back({part, id, split});
      return;
    }
    for (const GridInterval& c : g.children()) {
      if (c.interval().intersects(q_)) visit(c, holder_avg, holder);
    }
  }

  const PiecewiseMeasure& w_;
  Interval q_;
  GridFamily grid_;
  LinearizationMap& out_;
  std::vector<Rational> breaks_;
  std::map<GridInterval, size_t> index_;
};

}  // namespace

LinearizationMap linearize_maximal(const PiecewiseMeasure& w, const Interval& q, const GridFamily& grid) {
  if (w.has_atoms()) fail(ErrorCode::AtomicPart, "linearization of a measure with atoms");
  if (grid.j_min > grid.j_max) fail(ErrorCode::ScaleRange, "empty scale window");
  if (pow2(grid.j_max) < q.length()) fail(ErrorCode::ScaleRange, "Q is longer than the coarsest grid scale");
  LinearizationMap out{q, grid, {}, {}, 0};
  Linearizer(w, q, grid, out).run();

  // leaves come out in position order; build E(I) with abutting pieces merged
  for (const auto& leaf : out.leaves) {
    auto& set = out.assignments[leaf.assignment].set;
    if (!set.empty() && set.back().b() == leaf.piece.a()) set.back() = Interval(set.back().a(), leaf.piece.b());
    else set.push_back(leaf.piece);
  }
  // sort assignments by interval and remap leaves
  std::vector<size_t> order(out.assignments.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return out.assignments[x].interval < out.assignments[y].interval; });
  std::vector<size_t> rank(order.size());
  std::vector<LinearizationMap::Assignment> sorted;
  sorted.reserve(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = i;
    sorted.push_back(std::move(out.assignments[order[i]]));
  }
  out.assignments = std::move(sorted);
  for (auto& leaf : out.leaves) leaf.assignment = rank[leaf.assignment];
  return out;
}

Rational LinearizationMap::value_at(const Rational& x) const {
  auto it = std::upper_bound(leaves.begin(), leaves.end(), x,
                             [](const Rational& v, const Leaf& l) { return v < l.piece.a(); });
  if (it == leaves.begin()) fail(ErrorCode::InvalidArgument, "point outside Q");
  --it;
  if (!it->piece.contains(x)) fail(ErrorCode::InvalidArgument, "point outside Q");
  return assignments[it->assignment].average;
}

nlohmann::json LinearizationMap::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const Assignment& a : assignments) {
    nlohmann::json set = nlohmann::json::array();
    for (const Interval& iv : a.set) set.push_back({format_rational(iv.a()), format_rational(iv.b())});
    const Interval iv = a.interval.interval();
    arr.push_back({{"grid", std::string(to_string(a.interval.kind))},
                   {"j", a.interval.j},
                   {"n", a.interval.n.str()},
                   {"I", {format_rational(iv.a()), format_rational(iv.b())}},
                   {"average", format_rational(a.average)},
                   {"E", std::move(set)}});
  }
  return {{"Q", {format_rational(q.a()), format_rational(q.b())}},
          {"grid", std::string(to_string(grid.kind))},
          {"j_min", grid.j_min},
          {"j_max", grid.j_max},
          {"assignments", std::move(arr)}};
}

}  // namespace weightlab
