#include "weightlab/measure.hpp"

#include "weightlab/errors.hpp"

#include <algorithm>

namespace weightlab {

Interval::Interval(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
  if (!(a_ < b_)) {
    fail(ErrorCode::InvalidArgument,
         "interval requires a < b, got [" + format_rational(a_) + ", " + format_rational(b_) + ")");
  }
}

std::optional<Interval> Interval::intersection(const Interval& other) const {
  const Rational& lo = std::max(a_, other.a_);
  const Rational& hi = std::min(b_, other.b_);
  if (lo < hi) return Interval(lo, hi);
  return std::nullopt;
}

Interval Interval::middle_third() const {
  const Rational third = length() / 3;
  return {a_ + third, a_ + 2 * third};
}

PiecewiseMeasure::PiecewiseMeasure(std::vector<Piece> pieces, std::vector<Atom> atoms, bool approximate)
    : pieces_(std::move(pieces)), atoms_(std::move(atoms)), approximate_(approximate) {
  normalize();
}

PiecewiseMeasure PiecewiseMeasure::uniform(const Interval& support, const Rational& total_mass) {
  return PiecewiseMeasure({Piece{support, total_mass / support.length()}});
}

void PiecewiseMeasure::normalize() {
  for (const Piece& p : pieces_) {
    if (p.density < 0) fail(ErrorCode::InvalidArgument, "negative density");
  }
  std::erase_if(pieces_, [](const Piece& p) { return p.density == 0; });
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& x, const Piece& y) { return x.interval.a() < y.interval.a(); });
  std::vector<Piece> merged;
  merged.reserve(pieces_.size());
  for (Piece& p : pieces_) {
    if (!merged.empty()) {
      Piece& last = merged.back();
      if (p.interval.a() < last.interval.b()) fail(ErrorCode::InvalidArgument, "overlapping pieces");
      if (p.interval.a() == last.interval.b() && p.density == last.density) {
        last.interval = Interval(last.interval.a(), p.interval.b());
        continue;
      }
    }
    merged.push_back(std::move(p));
  }
  pieces_ = std::move(merged);

  for (const Atom& at : atoms_) {
    if (at.mass <= 0) fail(ErrorCode::InvalidArgument, "atom masses must be positive");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.position < y.position; });
  for (size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].position == atoms_[i - 1].position) fail(ErrorCode::InvalidArgument, "duplicate atom position");
  }

  prefix_.assign(pieces_.size() + 1, Rational(0));
  for (size_t i = 0; i < pieces_.size(); ++i) {
    prefix_[i + 1] = prefix_[i] + pieces_[i].density * pieces_[i].interval.length();
  }
}

Rational PiecewiseMeasure::total_mass() const {
  Rational m = prefix_.empty() ? Rational(0) : prefix_.back();
  for (const Atom& at : atoms_) m += at.mass;
  return m;
}

Rational PiecewiseMeasure::cdf(const Rational& x) const {
  if (pieces_.empty()) return Rational(0);
  // first piece with a >= x
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const Rational& v, const Piece& p) { return v <= p.interval.a(); });
  const size_t idx = static_cast<size_t>(it - pieces_.begin());
  if (idx == 0) return Rational(0);
  const Piece& prev = pieces_[idx - 1];
  if (x >= prev.interval.b()) return prefix_[idx];
  return prefix_[idx - 1] + prev.density * (x - prev.interval.a());
}

Rational PiecewiseMeasure::measure_of(const Interval& interval) const {
  Rational m = cdf(interval.b()) - cdf(interval.a());
  const auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), interval.a(),
                                   [](const Atom& at, const Rational& v) { return at.position < v; });
  for (auto it = lo; it != atoms_.end() && it->position < interval.b(); ++it) m += it->mass;
  return m;
}

std::optional<size_t> PiecewiseMeasure::piece_index(const Rational& x) const {
  const auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                                   [](const Rational& v, const Piece& p) { return v < p.interval.a(); });
  if (it == pieces_.begin()) return std::nullopt;
  const size_t idx = static_cast<size_t>(it - pieces_.begin()) - 1;
  if (pieces_[idx].interval.contains(x)) return idx;
  return std::nullopt;
}

Rational PiecewiseMeasure::density_at(const Rational& x) const {
  const auto at = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom& a, const Rational& v) { return a.position < v; });
  if (at != atoms_.end() && at->position == x) {
    fail(ErrorCode::AtomAtPoint, "density requested at atom position " + format_rational(x));
  }
  if (const auto idx = piece_index(x)) return pieces_[*idx].density;
  return Rational(0);
}

PiecewiseMeasure PiecewiseMeasure::translated(const Rational& t) const {
  std::vector<Piece> pieces;
  pieces.reserve(pieces_.size());
  for (const Piece& p : pieces_) pieces.push_back({p.interval.translated(t), p.density});
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const Atom& at : atoms_) atoms.push_back({at.position + t, at.mass});
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approximate_);
}

PiecewiseMeasure PiecewiseMeasure::scaled(const Rational& c) const {
  if (c < 0) fail(ErrorCode::InvalidArgument, "negative scale factor");
  std::vector<Piece> pieces;
  for (const Piece& p : pieces_) pieces.push_back({p.interval, p.density * c});
  std::vector<Atom> atoms;
  if (c > 0) {
    for (const Atom& at : atoms_) atoms.push_back({at.position, at.mass * c});
  }
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approximate_);
}

PiecewiseMeasure PiecewiseMeasure::reflected() const {
  std::vector<Piece> pieces;
  pieces.reserve(pieces_.size());
  for (const Piece& p : pieces_) pieces.push_back({Interval(-p.interval.b(), -p.interval.a()), p.density});
  std::vector<Atom> atoms;
  for (const Atom& at : atoms_) atoms.push_back({-at.position, at.mass});
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approximate_);
}

PiecewiseMeasure PiecewiseMeasure::restricted(const Interval& interval) const {
  std::vector<Piece> pieces;
  const auto first = std::upper_bound(pieces_.begin(), pieces_.end(), interval.a(),
                                      [](const Rational& v, const Piece& p) { return v < p.interval.b(); });
  for (auto it = first; it != pieces_.end() && it->interval.a() < interval.b(); ++it) {
    if (auto cut = it->interval.intersection(interval)) pieces.push_back({*cut, it->density});
  }
  std::vector<Atom> atoms;
  for (const Atom& at : atoms_) {
    if (interval.contains(at.position)) atoms.push_back(at);
  }
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approximate_);
}

PiecewiseMeasure PiecewiseMeasure::power_weight(const Rational& exponent, bool allow_approximate) const {
  if (has_atoms()) fail(ErrorCode::AtomicPart, "power_weight requires an atom-free measure");
  std::vector<Piece> pieces;
  pieces.reserve(pieces_.size());
  bool approx = approximate_;
  const Real e = to_real(exponent);
  for (const Piece& p : pieces_) {
    Rational value;
    if (!exact_power(p.density, exponent, value)) {
      if (!allow_approximate) {
        fail(ErrorCode::NonRationalPower,
             "density " + format_rational(p.density) + " to the power " + format_rational(exponent) +
                 " is irrational");
      }
      value = from_real(boost::multiprecision::pow(to_real(p.density), e));
      approx = true;
    }
    pieces.push_back({p.interval, value});
  }
  return PiecewiseMeasure(std::move(pieces), {}, approx);
}

std::optional<std::pair<Rational, Rational>> PiecewiseMeasure::support_bounds() const {
  std::optional<Rational> lo, hi;
  if (!pieces_.empty()) {
    lo = pieces_.front().interval.a();
    hi = pieces_.back().interval.b();
  }
  if (!atoms_.empty()) {
    if (!lo || atoms_.front().position < *lo) lo = atoms_.front().position;
    if (!hi || atoms_.back().position > *hi) hi = atoms_.back().position;
  }
  if (!lo) return std::nullopt;
  return std::pair{*lo, *hi};
}

std::vector<Rational> PiecewiseMeasure::breakpoints() const {
  std::vector<Rational> out;
  out.reserve(2 * pieces_.size());
  for (const Piece& p : pieces_) {
    if (out.empty() || out.back() != p.interval.a()) out.push_back(p.interval.a());
    out.push_back(p.interval.b());
  }
  return out;
}

PiecewiseMeasure disjoint_sum(std::span<const PiecewiseMeasure> parts) {
  std::vector<Piece> pieces;
  std::vector<Atom> atoms;
  bool approx = false;
  for (const PiecewiseMeasure& m : parts) {
    pieces.insert(pieces.end(), m.pieces().begin(), m.pieces().end());
    for (const Atom& at : m.atoms()) {
      auto it = std::find_if(atoms.begin(), atoms.end(), [&](const Atom& x) { return x.position == at.position; });
      if (it != atoms.end()) {
        it->mass += at.mass;
      } else {
        atoms.push_back(at);
      }
    }
    approx = approx || m.approximate();
  }
  return PiecewiseMeasure(std::move(pieces), std::move(atoms), approx);
}

Rational total_mass(const PiecewiseMeasure& mu) { return mu.total_mass(); }
Rational measure_of(const PiecewiseMeasure& mu, const Interval& interval) { return mu.measure_of(interval); }
PiecewiseMeasure translate(const PiecewiseMeasure& mu, const Rational& t) { return mu.translated(t); }
Rational density_at(const PiecewiseMeasure& mu, const Rational& x) { return mu.density_at(x); }
PiecewiseMeasure power_weight(const PiecewiseMeasure& mu, const Rational& exponent) {
  return mu.power_weight(exponent);
}

}  // namespace weightlab
