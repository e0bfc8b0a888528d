// Acceptance criteria 1-9. One PASS/FAIL line per criterion; exit status is
// the number of failing criteria.

#include "gen.hpp"

#include "weightlab/cantor.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"
#include "weightlab/triadic.hpp"
#include "weightlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace weightlab;

namespace {

// Independent oracle values (tests/oracles/*.py on `weightlab build` output,
// greedy sign rule, depth 2).
constexpr double kHlowerMinK4 = 3.395199739593;  // hlower_min.py, 16 samples per middle third
constexpr double kHlowerMinK6 = 5.548541261429;  // hlower_min.py, 16 samples per middle third
constexpr double kProp41K4[3] = {2.473052410991, 4.321543318840, 16.405937656294};  // prop41_integral.py, p = 3/2, 2, 3

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

std::string errors_of(const VerificationReport& r) {
  std::string s;
  for (const ReportError& e : r.errors) s += (s.empty() ? "" : "; ") + e.code + ": " + e.message;
  return s;
}

/// Every threshold, gating or informational, must hold and no error may be recorded.
void expect_all(Outcome& o, const VerificationReport& r) {
  o.expect(r.errors.empty(), r.check_name + " errors: " + errors_of(r));
  for (const Threshold& t : r.thresholds) o.expect(t.pass, r.check_name + ": " + t.name);
}

VerifyOptions options() {
  VerifyOptions o;
  o.samples = 64;
  o.hilbert_samples = 16;
  return o;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k : {2, 4, 6, 8}) {
    const VerificationReport r = check_contmax(k, 2, options());
    if (const Constant* c = r.find_constant("max M/w on residuals")) {
      o.detail << " k=" << k << " max M/w=" << c->value;
    } else {
      o.detail << " k=" << k << " not built";
    }
    expect_all(o, r);
  }
  const double s = seconds_since(t0);
  o.expect(s < 60.0, "runtime < 60 s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const VerificationReport r = check_hlower({4, 6, 8, 10}, 2, options());
  for (int k : {4, 6, 8, 10}) {
    const Constant* c = r.find_constant("k=" + std::to_string(k) + " min |Hw|/w");
    o.detail << " k=" << k << " min=" << (c ? std::to_string(c->value) : std::string("n/a"));
  }
  expect_all(o, r);
  const Constant* k4 = r.find_constant("k=4 min |Hw|/w");
  const Constant* k6 = r.find_constant("k=6 min |Hw|/w");
  o.expect(k4 && close(k4->value, kHlowerMinK4, 1e-6), "k=4 minimum matches the oracle within 1e-6");
  o.expect(k6 && close(k6->value, kHlowerMinK6, 1e-6), "k=6 minimum matches the oracle within 1e-6");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const std::vector<Rational> ps{Rational(3, 2), Rational(2), Rational(3)};
  const VerificationReport r = check_prop_unbddH1({4, 6, 8}, ps, 2, options());
  for (int k : {4, 6}) {
    const std::string key = "k=" + std::to_string(k);
    if (const Constant* m = r.find_constant(key + " middle mass")) o.detail << " " << key << " middle mass=" << m->value;
  }
  expect_all(o, r);
  for (size_t i = 0; i < ps.size(); ++i) {
    const std::string name = "k=4 p=" + std::string(i == 0 ? "3/2" : i == 1 ? "2" : "3") + " integral |Hw|^p u";
    const Constant* c = r.find_constant(name);
    o.expect(c && close(c->value, kProp41K4[i], 1e-6), name + " matches the oracle within 1e-6");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const VerifyOptions opt = options();
  const PiecewiseMeasure w = build_w_k(4, 2, opt.rule).measure;
  const auto qs = default_q_family(w, 8, opt.random_q, opt.seed);
  for (const Rational& p : {Rational(3, 2), Rational(2)}) {
    const VerificationReport r = sawyer_testing(w, p, qs, opt);
    o.detail << " w_4 p=" << to_double(p) << " sup/13^p=" << r.find_constant("sup testing ratio / bound")->value;
    expect_all(o, r);
  }
  const PiecewiseMeasure sum = translated_sum(3, 2, opt.rule);
  const auto sq = default_q_family(sum, 6, opt.random_q, opt.seed);
  for (const Rational& p : {Rational(3, 2), Rational(2)}) {
    const VerificationReport r = sawyer_testing(sum, p, sq, opt);
    o.detail << " K=3 p=" << to_double(p) << " sup/13^p=" << r.find_constant("sup testing ratio / bound")->value;
    expect_all(o, r);
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const VerifyOptions opt = options();
  const PiecewiseMeasure w = build_w_k(4, 2, opt.rule).measure;
  const auto qs = default_q_family(w, 8, opt.random_q, opt.seed);
  const VerificationReport r = linearization_testing(w, {Rational(3, 2), Rational(2), Rational(3)},
                                                     {GridKind::Dyadic, GridKind::Shifted}, qs, opt);
  double worst = 0.0;
  for (const Constant& c : r.computed_constants) {
    if (c.name.find("max total / w(Q)") != std::string::npos) worst = std::max(worst, c.value);
  }
  o.detail << " Q tested=" << r.parameters["q_tested"].get<size_t>() << " max total/w(Q)=" << worst;
  expect_all(o, r);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int r : {1, 2}) {
    const VerificationReport rep = theorem6_check(r, 2, r + 10);
    o.detail << " r=" << r;
    for (int t = 0; t <= 2; ++t) {
      if (const Constant* c = rep.find_constant("block " + std::to_string(t) + " value")) o.detail << " " << c->value;
    }
    expect_all(o, rep);
  }
  const double s = seconds_since(t0);
  o.expect(s < 120.0, "runtime < 120 s");
  return o;
}

Outcome criterion7() {
  Outcome o;
  const TransformValue centre = hilbert_exact(cantor_measure_approx(12), Rational(1, 2));
  o.detail << " |H(gamma_12)(1/2)|=" << std::abs(centre.to_double());
  o.expect(std::abs(centre.to_double()) < 1e-8, "|H(gamma_12)(1/2)| < 1e-8");

  const Interval gap = cantor_gap(1, 1);
  const ZeroEstimate z10 = find_zero_at(1, 1, 10, 1e-12);
  const ZeroEstimate z12 = find_zero_at(1, 1, 12, 1e-12);
  for (const ZeroEstimate* z : {&z10, &z12}) {
    o.expect(gap.a() < z->lo && z->hi < gap.b(), "zeta^1_1 bracket inside (1/9, 2/9)");
  }
  o.detail << " zeta^1_1: R=10 " << z10.estimate << " R=12 " << z12.estimate;
  o.expect(std::abs(z10.estimate - z12.estimate) <= 1e-8, "zeta^1_1 stable from R=10 to R=12 within 1e-8");

  const LambdaMeasure lambda = build_lambda(3, 1e-9);
  double worst = 0.0;
  for (const ZeroEstimate& a : lambda.zeros) {
    for (const ZeroEstimate& b : lambda.zeros) {
      if (a.r == b.r && a.l + b.l == (1L << a.r) + 1) worst = std::max(worst, std::abs(a.estimate + b.estimate - 1.0));
    }
  }
  o.detail << " max |zeta^r_l + zeta^r_mirror - 1|=" << worst;
  o.expect(worst <= 2e-8, "zero symmetry within 2e-8 for r <= 3");
  return o;
}

Outcome criterion8() {
  Outcome o;
  weightlab::testing::Gen g(20240601);
  double worst_h = 0.0, worst_m = 0.0;
  size_t bad_h = 0, bad_m = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const PiecewiseMeasure mu = g.measure(4);
    for (int i = 0; i < 20; ++i) {
      const Rational x = g.point_off_breakpoints(mu, -Rational(1, 2), Rational(3, 2));
      const TransformValue e = hilbert_exact(mu, x);
      const TransformValue q = hilbert_quadrature_oracle(mu, x, 1e-12);
      const double diff = std::abs(e.to_double() - q.to_double());
      worst_h = std::max(worst_h, diff);
      if (diff > 1e-9 + e.error_bound + q.error_bound) ++bad_h;
      const Rational m = maximal_exact(mu, x);
      const Rational lower = maximal_grid_oracle(mu, x, 1000);
      const double gap = m > 0 ? to_double((m - lower) / m) : 0.0;
      worst_m = std::max(worst_m, gap);
      if (lower > m || gap > 1e-6) ++bad_m;
    }
  }
  o.detail << " max |exact - oracle|=" << worst_h << " max relative M gap=" << worst_m;
  o.expect(bad_h == 0, std::to_string(bad_h) + " Hilbert disagreements");
  o.expect(bad_m == 0, std::to_string(bad_m) + " maximal disagreements");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const VerificationReport r = gliding_hump_partial(Rational(2), 0.75, 4, 1, options());
  for (int k = 1; k <= 4; ++k) {
    o.detail << " k=" << k << " block/self=" << r.find_constant("k=" + std::to_string(k) + " block / self")->value;
  }
  o.detail << " ratio=" << r.find_constant("K=4 partial sum / model")->value;
  // the criterion asks only for the K_max ratio; the other K rows are reported
  o.expect(r.errors.empty(), "errors: " + errors_of(r));
  for (const Threshold& t : r.thresholds) {
    if (t.gating) o.expect(t.pass, t.name);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                       criterion6, criterion7, criterion8, criterion9};
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %zu %s:%s (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures;
}
