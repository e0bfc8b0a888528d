#pragma once

#include "weightlab/detail/dd.hpp"
#include "weightlab/measure.hpp"

#include <functional>
#include <span>
#include <vector>

namespace weightlab {

/// Integrand evaluated at an endpoint-plus-offset point.
using PointFunction = std::function<double(const detail::Point&)>;

struct QuadratureOptions {
  double tol = 1e-10;     // relative tolerance per piece
  int sign_samples = 16;  // uniform probes used to locate sign changes of g
};

struct QuadratureResult {
  double value = 0.0;
  double error_bound = 0.0;
  size_t evaluations = 0;

  QuadratureResult& operator+=(const QuadratureResult& other);
};

/// Integral of g over [a, b] by tanh-sinh quadrature, which tolerates
/// integrable endpoint singularities. Nodes are passed as endpoint plus
/// offset so narrow intervals far from 0 stay resolved.
QuadratureResult integrate_interval(const PointFunction& g, const Rational& a, const Rational& b,
                                    const QuadratureOptions& options = {});

/// Integral of g over [a, b] by adaptive Gauss-Kronrod for smooth integrands.
QuadratureResult integrate_smooth(const PointFunction& g, const Rational& a, const Rational& b,
                                  const QuadratureOptions& options = {});

/// Points in (a, b) where g changes sign between consecutive probes, located
/// by bisection and rounded to rationals.
std::vector<Rational> sign_change_points(const PointFunction& g, const Rational& a, const Rational& b, int samples);

/// Integrals of |g|^p over [a, b] for several exponents sharing one set of
/// evaluations of g. The interval is cut at sign changes of g first.
std::vector<QuadratureResult> integrate_abs_powers(const PointFunction& g, const Rational& a, const Rational& b,
                                                   std::span<const double> exponents,
                                                   const QuadratureOptions& options = {});

/// Integral over Q of g against a weight: per-piece quadrature for the
/// absolutely continuous part, an exact finite sum over the atoms in Q.
/// Throws NoConvergence when a piece misses the tolerance.
QuadratureResult weighted_integral(const PointFunction& g, const PiecewiseMeasure& weight, const Interval& q,
                                   const QuadratureOptions& options = {});

}  // namespace weightlab
