#include "weightlab/quadrature.hpp"

#include "weightlab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <map>
#include <utility>

namespace weightlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}


void check(const QuadratureResult& r, double l1, double tol, const Rational& a, const Rational& b) {
  if (!std::isfinite(r.value) || r.error_bound > std::max(tol * l1, 1e-300) * 10.0) {
    fail(ErrorCode::NoConvergence, "quadrature on [" + format_rational(a) + ", " + format_rational(b) +
                                       "] reached error " + std::to_string(r.error_bound) + " for |integral| " +
                                       std::to_string(l1));
  }
}

/// Maps tanh-sinh's (z, complement) on [-1, 1] to a double-double point.
struct Endpoints {
  detail::DD a, b;
  double half;

  detail::Point point(double z, double zc) const {
    // zc is minus the distance to -1 for z < 0 and the distance to +1 otherwise
    if (z < 0) return {a, -half * zc};
    return {b, -half * zc};
  }
};

}  // namespace

QuadratureResult& QuadratureResult::operator+=(const QuadratureResult& other) {
  value += other.value;
  error_bound += other.error_bound;
  evaluations += other.evaluations;
  return *this;
}

QuadratureResult integrate_interval(const PointFunction& g, const Rational& a, const Rational& b,
                                    const QuadratureOptions& options) {
  QuadratureResult out;
  if (!(a < b)) return out;
  const Endpoints ends{detail::to_dd(a), detail::to_dd(b), to_double((b - a) / 2)};
  auto f = [&](double z, double zc) {
    ++out.evaluations;
    return g(ends.point(z, zc));
  };
  double err = 0.0, l1 = 0.0;
  size_t levels = 0;
  const double v = tanh_sinh_rule().integrate(f, options.tol, &err, &l1, &levels);
  out.value = ends.half * v;
  out.error_bound = ends.half * (err + 16 * kEps * l1);
  check(out, ends.half * l1, options.tol, a, b);
  return out;
}

QuadratureResult integrate_smooth(const PointFunction& g, const Rational& a, const Rational& b,
                                  const QuadratureOptions& options) {
  QuadratureResult out;
  if (!(a < b)) return out;
  const detail::DD base = detail::to_dd(a);
  const double len = to_double(b - a);
  auto f = [&](double t) {
    ++out.evaluations;
    return 0.5 * len * g(detail::Point{base, 0.5 * len * (t + 1.0)});
  };
  // integrating over [-1, 1] keeps the rule's error estimate in the units of
  // the result; it does not rescale the estimate of subintervals
  double err = 0.0, l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, -1.0, 1.0, 12, options.tol, &err, &l1);
  out.value = v;
  out.error_bound = err + 16 * kEps * l1;
  check(out, l1, options.tol, a, b);
  return out;
}

std::vector<Rational> sign_change_points(const PointFunction& g, const Rational& a, const Rational& b, int samples) {
  std::vector<Rational> cuts;
  if (!(a < b) || samples < 2) return cuts;
  const detail::DD base = detail::to_dd(a);
  const double len = to_double(b - a);
  auto at = [&](double t) { return g(detail::Point{base, t}); };
  // uniform probes plus geometric ones toward both ends
  std::vector<double> probes;
  for (int i = 1; i < samples; ++i) probes.push_back(len * i / samples);
  for (double f = 0.5 / samples; f > 1e-12; f *= 0.1) {
    probes.push_back(len * f);
    probes.push_back(len * (1.0 - f));
  }
  std::sort(probes.begin(), probes.end());
  double prev_t = probes.front();
  double prev_v = at(prev_t);
  for (size_t i = 1; i < probes.size(); ++i) {
    const double t = probes[i];
    const double v = at(t);
    if ((prev_v < 0 && v > 0) || (prev_v > 0 && v < 0)) {
      double lo = prev_t, hi = t;
      const bool rising = v > 0;
      for (int it = 0; it < 200 && hi - lo > 4 * kEps * len; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((at(mid) > 0) == rising) hi = mid;
        else lo = mid;
      }
      const Rational cut = a + from_double(0.5 * (lo + hi));
      if (a < cut && cut < b && (cuts.empty() || cuts.back() < cut)) cuts.push_back(cut);
    }
    prev_t = t;
    prev_v = v;
  }
  return cuts;
}

namespace {

/// tanh-sinh of |g|^p over [lo, hi] for every exponent, sharing evaluations.
void abs_powers_on(const PointFunction& g, const Rational& lo, const Rational& hi, std::span<const double> exponents,
                   const QuadratureOptions& options, std::vector<QuadratureResult>& out) {
  const Endpoints ends{detail::to_dd(lo), detail::to_dd(hi), to_double((hi - lo) / 2)};
  // the node sequence depends only on the interval, so evaluations are shared;
  // z alone collides near the endpoints, where it rounds to +-1
  std::map<std::pair<double, double>, double> cache;
  auto base = [&](double z, double zc) {
    auto [it, inserted] = cache.try_emplace({z, zc}, 0.0);
    if (inserted) it->second = std::abs(g(ends.point(z, zc)));
    return it->second;
  };
  for (size_t i = 0; i < exponents.size(); ++i) {
    const double p = exponents[i];
    auto f = [&](double z, double zc) { return std::pow(base(z, zc), p); };
    double err = 0.0, l1 = 0.0;
    size_t levels = 0;
    const double v = tanh_sinh_rule().integrate(f, options.tol, &err, &l1, &levels);
    QuadratureResult r;
    r.value = ends.half * v;
    r.error_bound = ends.half * (err + 16 * kEps * l1);
    check(r, ends.half * l1, options.tol, lo, hi);
    out[i] += r;
  }
  out[0].evaluations += cache.size();
}

}  // namespace

std::vector<QuadratureResult> integrate_abs_powers(const PointFunction& g, const Rational& a, const Rational& b,
                                                   std::span<const double> exponents,
                                                   const QuadratureOptions& options) {
  std::vector<QuadratureResult> out(exponents.size());
  if (!(a < b)) return out;
  // |g|^p has a cusp where g changes sign; cut there so both sides stay smooth
  std::vector<Rational> knots{a};
  for (Rational& c : sign_change_points(g, a, b, options.sign_samples)) knots.push_back(std::move(c));
  knots.push_back(b);
  for (size_t k = 0; k + 1 < knots.size(); ++k) abs_powers_on(g, knots[k], knots[k + 1], exponents, options, out);
  return out;
}

QuadratureResult weighted_integral(const PointFunction& g, const PiecewiseMeasure& weight, const Interval& q,
                                   const QuadratureOptions& options) {
  QuadratureResult total;
  for (const Piece& p : weight.pieces()) {
    const auto part = p.interval.intersection(q);
    if (!part) continue;
    QuadratureResult r = integrate_interval(g, part->a(), part->b(), options);
    const double d = to_double(p.density);
    r.value *= d;
    r.error_bound *= d;
    total += r;
  }
  for (const Atom& at : weight.atoms()) {
    if (!q.contains(at.position)) continue;
    const double m = to_double(at.mass);
    const double v = g(detail::Point{detail::to_dd(at.position), 0.0});
    total.value += m * v;
    total.error_bound += 4 * kEps * std::abs(m * v);
    ++total.evaluations;
  }
  if (weight.approximate()) total.error_bound += 4 * real_epsilon() * std::abs(total.value);
  return total;
}

}  // namespace weightlab
