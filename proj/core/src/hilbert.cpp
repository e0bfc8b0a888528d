#include "weightlab/hilbert.hpp"

#include "weightlab/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace weightlab {

std::string_view to_string(TransformKind kind) noexcept {
  switch (kind) {
    case TransformKind::Finite: return "finite";
    case TransformKind::PlusInfinity: return "+inf";
    case TransformKind::MinusInfinity: return "-inf";
  }
  return "finite";
}

double TransformValue::to_double() const {
  switch (kind) {
    case TransformKind::PlusInfinity: return std::numeric_limits<double>::infinity();
    case TransformKind::MinusInfinity: return -std::numeric_limits<double>::infinity();
    case TransformKind::Finite: break;
  }
  return value.convert_to<double>();
}

namespace {

void reject_atom(const PiecewiseMeasure& mu, const Rational& x) {
  for (const Atom& at : mu.atoms()) {
    if (at.position == x) fail(ErrorCode::AtomAtPoint, "transform requested at atom " + format_rational(x));
  }
}

}  // namespace

TransformValue hilbert_exact(const PiecewiseMeasure& mu, const Rational& x) {
  reject_atom(mu, x);
  const auto pieces = mu.pieces();

  // Net jump (left density minus right density) at x when x is a breakpoint.
  Rational jump(0);
  bool at_breakpoint = false;
  for (const Piece& p : pieces) {
    if (p.interval.b() == x) {
      jump += p.density;
      at_breakpoint = true;
    }
    if (p.interval.a() == x) {
      jump -= p.density;
      at_breakpoint = true;
    }
  }
  TransformValue out;
  out.value = to_real(Rational(0));
  if (at_breakpoint && jump != 0) {
    // c log|t - x| with c = jump -> -c * inf
    out.kind = jump > 0 ? TransformKind::MinusInfinity : TransformKind::PlusInfinity;
    return out;
  }

  Real magnitude = to_real(Rational(0));
  for (const Piece& p : pieces) {
    const Rational& a = p.interval.a();
    const Rational& b = p.interval.b();
    Real term;
    if (x == a || x == b) {
      // zero net jump at x: both pieces abutting x share a density; the
      // singular logs cancel, keep the regular one
      const Rational far = (x == a) ? Rational(b - x) : Rational(x - a);
      term = to_real(p.density) * boost::multiprecision::log(to_real(far));
      if (x == a) {
        out.value += term;
      } else {
        out.value -= term;
      }
      magnitude += boost::multiprecision::abs(term);
      continue;
    }
    Rational ratio = (b - x) / (a - x);
    if (ratio < 0) ratio = -ratio;
    term = to_real(p.density) * boost::multiprecision::log(to_real(ratio));
    out.value += term;
    magnitude += boost::multiprecision::abs(term);
  }
  for (const Atom& at : mu.atoms()) {
    const Real term = to_real(at.mass / (at.position - x));
    out.value += term;
    magnitude += boost::multiprecision::abs(term);
  }
  const double n = static_cast<double>(pieces.size() + mu.atoms().size() + 1);
  out.error_bound = 4.0 * n * real_epsilon() * magnitude.convert_to<double>();
  if (mu.approximate()) {
    // densities carry relative rounding at the working precision
    out.error_bound += 2.0 * real_epsilon() * magnitude.convert_to<double>();
  }
  return out;
}

TransformValue hilbert_quadrature_oracle(const PiecewiseMeasure& mu, const Rational& x, double tol) {
  reject_atom(mu, x);
  using boost::math::quadrature::gauss_kronrod;
  const double xd = to_double(x);
  double total = 0.0;
  double err_total = 0.0;

  auto integrate_cell = [&](auto&& f, double lo, double hi) {
    if (!(lo < hi)) return;
    double err = 0.0;
    double l1 = 0.0;
    // on [-1, 1] the rule's error estimate is in the units of the integral
    // (below the top level it is conservative by the subdivision factor)
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    auto unit = [&](double s) { return half * f(mid + half * s); };
    const double v = gauss_kronrod<double, 31>::integrate(unit, -1.0, 1.0, 12, 1e-14, &err, &l1);
    total += v;
    err_total += err;
  };
  // kernel over [lo, hi] with x outside, in the offset u = y - x so that
  // 1/u carries no cancellation; cells graded so 1/u varies by at most 2x each
  auto integrate_kernel = [&](auto&& f, double lo, double hi) {
    if (!(lo < hi)) return;
    const bool right = xd < lo;
    const double near = right ? lo - xd : xd - hi, far = right ? hi - xd : xd - lo;
    const double sign = right ? 1.0 : -1.0;
    auto g = [&](double u) { return f(xd + sign * u) / (sign * u); };
    for (double d = near; d < far; d *= 2.0) integrate_cell(g, d, std::min(2.0 * d, far));
  };

  struct Span {
    double a, b, d;
  };
  std::vector<Span> spans;
  for (const Piece& p : mu.pieces()) {
    if (p.interval.a() == x || p.interval.b() == x) {
      fail(ErrorCode::InvalidArgument, "quadrature oracle requires x off the breakpoints");
    }
    spans.push_back({to_double(p.interval.a()), to_double(p.interval.b()), to_double(p.density)});
  }
  // f(y): density by lookup, the only thing the oracle knows about mu
  auto f = [&](double y) {
    auto it = std::upper_bound(spans.begin(), spans.end(), y, [](double v, const Span& s) { return v < s.a; });
    if (it == spans.begin()) return 0.0;
    --it;
    return y < it->b ? it->d : 0.0;
  };

  const auto home = mu.piece_index(x);
  for (size_t i = 0; i < spans.size(); ++i) {
    const Span& sp = spans[i];
    if (home && *home == i) {
      const double h = std::min(xd - sp.a, sp.b - xd);
      auto paired = [&](double t) { return t == 0.0 ? 0.0 : (f(xd + t) - f(xd - t)) / t; };
      integrate_cell(paired, 0.0, 0.999 * h);
      integrate_kernel(f, sp.a, xd - 0.999 * h);
      integrate_kernel(f, xd + 0.999 * h, sp.b);
    } else {
      integrate_kernel(f, sp.a, sp.b);
    }
  }
  for (const Atom& at : mu.atoms()) total += to_double(at.mass) / (to_double(at.position) - xd);
  if (!(err_total <= tol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "quadrature oracle error estimate %.3g exceeds tolerance %.3g", err_total, tol);
    fail(ErrorCode::NoConvergence, std::string(buf) + " at x=" + format_rational(x));
  }
  TransformValue out;
  out.value = make_real(total);
  out.error_bound = err_total + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
  return out;
}

}  // namespace weightlab
