#pragma once

#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/quadrature.hpp"
#include "weightlab/rational.hpp"
#include "weightlab/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace weightlab::verify_detail {

/// "3/2" or "2".
inline std::string label(const Rational& q) {
  std::string s = format_rational(q);
  if (s.size() > 2 && s.compare(s.size() - 2, 2, "/1") == 0) s.resize(s.size() - 2);
  return s;
}

inline std::string kp(int k, const Rational& p) { return "k=" + std::to_string(k) + " p=" + label(p); }

/// p / (p - 1).
inline Rational dual_exponent(const Rational& p) { return p / (p - 1); }

/// Uniform double in [0, 1) from the top 53 bits, independent of the
/// standard library's distribution implementations.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1p-53; }

/// Integral of |g|^e over [a, b], plus a first-order allowance for an absolute
/// error `delta` in g: e * delta * int |g|^{e-1}.
struct PowerIntegral {
  double value = 0.0;
  double error_bound = 0.0;
};

/// One set of evaluations of g serves every exponent.
inline std::vector<PowerIntegral> abs_powers_with_slack(const PointFunction& g, const Rational& a, const Rational& b,
                                                        const std::vector<double>& es, const double& delta,
                                                        const QuadratureOptions& options) {
  std::vector<double> exps;
  for (double e : es) {
    exps.push_back(e);
    exps.push_back(e - 1.0);
  }
  const auto r = integrate_abs_powers(g, a, b, exps, options);
  std::vector<PowerIntegral> out;
  for (size_t i = 0; i < es.size(); ++i) {
    const QuadratureResult& main = r[2 * i];
    const QuadratureResult& lower = r[2 * i + 1];
    out.push_back({main.value, main.error_bound + es[i] * delta * (lower.value + lower.error_bound)});
  }
  return out;
}

}  // namespace weightlab::verify_detail
