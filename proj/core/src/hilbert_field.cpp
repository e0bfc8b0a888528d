#include "weightlab/hilbert.hpp"

#include "weightlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace weightlab {

namespace {

constexpr int kOrder = 50;
constexpr double kTheta = 0.5;
constexpr size_t kLeaf = 16;
constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

HilbertField::HilbertField(const PiecewiseMeasure& mu) {
  // accumulate jumps per breakpoint: +d at right ends, -d at left ends
  std::map<Rational, Rational> jumps;
  for (const Piece& p : mu.pieces()) {
    jumps[p.interval.a()] -= p.density;
    jumps[p.interval.b()] += p.density;
  }
  pos_.reserve(jumps.size());
  charge_.reserve(jumps.size());
  for (const auto& [t, c] : jumps) {
    if (c == 0) continue;
    pos_.push_back(detail::to_dd(t));
    charge_.push_back(to_double(c));
  }
  for (const Atom& at : mu.atoms()) {
    atom_pos_.push_back(detail::to_dd(at.position));
    atom_mass_.push_back(to_double(at.mass));
  }
  if (!pos_.empty()) {
    nodes_.reserve(4 * pos_.size() / kLeaf + 4);
    root_ = build(0, pos_.size());
  }
}

int HilbertField::build(size_t begin, size_t end) {
  Node node;
  node.begin = begin;
  node.end = end;
  const double lo = pos_[begin].hi;
  const double hi = pos_[end - 1].hi;
  node.center = 0.5 * (lo + hi);
  node.radius = std::max(0.5 * (hi - lo), std::abs(node.center) * 4 * kEps + 1e-300);
  node.moments.assign(kOrder + 1, 0.0);
  for (size_t i = begin; i < end; ++i) {
    const double u = detail::diff(pos_[i], detail::DD{node.center, 0.0}) / node.radius;
    double pw = 1.0;
    for (int n = 0; n <= kOrder; ++n) {
      node.moments[n] += charge_[i] * pw;
      pw *= u;
    }
    node.abs_charge += std::abs(charge_[i]);
  }
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(std::move(node));
  if (end - begin > kLeaf) {
    const size_t mid = begin + (end - begin) / 2;
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[index].left = l;
    nodes_[index].right = r;
  }
  return index;
}

HilbertField::Value HilbertField::at(const Rational& x) const { return at(detail::to_dd(x)); }

HilbertField::Value HilbertField::at_offset(const Rational& base, double offset) const {
  return at(detail::Point{detail::to_dd(base), offset});
}

HilbertField::Value HilbertField::at(const detail::Point& x) const {
  Value out;
  double value = 0.0;
  double err = 0.0;
  int infinite = 0;  // sign of an infinite contribution
  for (size_t i = 0; i < atom_pos_.size(); ++i) {
    const double dist = detail::distance(atom_pos_[i], x);
    if (dist == 0.0) fail(ErrorCode::AtomAtPoint, "transform requested at an atom");
    const double term = atom_mass_[i] / dist;
    value += term;
    err += 4 * kEps * std::abs(term);
  }
  if (root_ >= 0) {
    int stack[128];
    int top = 0;
    stack[top++] = root_;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      const double dx = -detail::distance(detail::DD{node.center, 0.0}, x);
      const double rho = node.radius / std::abs(dx);
      if (std::abs(dx) > 0.0 && rho <= kTheta) {
        // sum c log|x - t| = Q0 log|x - c| - sum_n Q_n (s / (x - c))^n / n
        const double z = node.radius / dx;
        const double cutoff = 0.25 * kEps * node.abs_charge;
        double acc = 0.0;
        double mag = 0.0;
        double pw = 1.0;
        double rho_pow = rho;
        double tail = node.abs_charge * rho / (1.0 - rho);
        for (int n = 1; n <= kOrder; ++n) {
          pw *= z;
          const double term = node.moments[n] * pw / n;
          acc += term;
          mag += std::abs(term);
          rho_pow *= rho;
          tail = node.abs_charge * rho_pow / ((n + 1) * (1.0 - rho));
          if (tail < cutoff) break;
        }
        const double lead = node.moments[0] * std::log(std::abs(dx));
        value += lead - acc;
        err += tail;
        err += 4 * kEps * (std::abs(lead) + mag) + node.abs_charge * 4 * kEps * (1.0 + std::abs(std::log(std::abs(dx))));
        continue;
      }
      if (node.left < 0) {
        for (size_t i = node.begin; i < node.end; ++i) {
          const double dist = detail::distance(pos_[i], x);
          if (dist == 0.0) {
            const int s = charge_[i] > 0 ? -1 : 1;
            if (infinite != 0 && infinite != s) {
              fail(ErrorCode::InvalidArgument, "conflicting singular contributions");
            }
            infinite = s;
            continue;
          }
          const double lg = std::log(std::abs(dist));
          const double term = charge_[i] * lg;
          value += term;
          // log rounding plus the distance error, which vanishes when x is
          // offset from this very breakpoint
          const double dist_err = equal(pos_[i], x.base)
                                      ? kEps * std::abs(x.offset)
                                      : kEps * std::abs(dist) + 0x1p-100 * (std::abs(pos_[i].hi) + std::abs(x.base.hi));
          err += 4 * kEps * std::abs(term) + std::abs(charge_[i]) * (dist_err / std::abs(dist));
        }
        continue;
      }
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  if (infinite != 0) {
    out.kind = infinite > 0 ? TransformKind::PlusInfinity : TransformKind::MinusInfinity;
    out.value = infinite > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = value;
  out.error_bound = err + 8 * kEps * std::abs(value);
  return out;
}

}  // namespace weightlab
