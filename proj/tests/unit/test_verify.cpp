#include "gen.hpp"

#include "weightlab/cantor.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/quadrature.hpp"
#include "weightlab/triadic.hpp"
#include "weightlab/verify.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <doctest.h>

#include <cmath>

using namespace weightlab;

namespace {

/// Fixed geometric mesh toward both endpoints, 10-point Gauss-Legendre per
/// cell, integrand from the closed-form transform at exact node positions.
double graded_oracle(const PiecewiseMeasure& mu, const PiecewiseMeasure& weight, double e) {
  double total = 0.0;
  for (const Piece& p : weight.pieces()) {
    const double a = to_double(p.interval.a()), b = to_double(p.interval.b());
    const double half = 0.5 * (b - a);
    std::vector<std::pair<double, double>> cells;
    double w = half;
    for (int level = 0; level < 50; ++level, w *= 0.5) {
      cells.emplace_back(a + 0.5 * w, a + w);
      cells.emplace_back(b - w, b - 0.5 * w);
    }
    cells.emplace_back(a, a + w);
    cells.emplace_back(b - w, b);
    for (const auto& [lo, hi] : cells) {
      const auto f = [&](double x) {
        return std::pow(std::abs(hilbert_exact(mu, from_double(x)).to_double()), e);
      };
      total += to_double(p.density) * boost::math::quadrature::gauss<double, 10>::integrate(f, lo, hi);
    }
  }
  return total;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("report thresholds judge quadrature values pessimistically") {
    VerificationReport rep;
    rep.check_name = "demo";
    rep.add_value("q", 2.0, Provenance::Quadrature, 0.5);
    rep.require("q <= 2.4", "q", Relation::LessEqual, 2.4);
    rep.require("q >= 1.4", "q", Relation::GreaterEqual, 1.4);
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.thresholds[0].pass);
    CHECK(rep.thresholds[1].pass);
    rep.thresholds[0].bound = 2.5;
    CHECK_FALSE(rep.consistent());
  }

  TEST_CASE("exact thresholds compare rationals") {
    VerificationReport rep;
    rep.check_name = "exact";
    rep.add_exact("third", Rational(1, 3));
    rep.require_exact("third == 1/3", "third", Relation::Equal, Rational(1, 3));
    rep.require_exact("third > 1/3", "third", Relation::Greater, Rational(1, 3)).gating = false;
    CHECK(rep.thresholds[0].pass);
    CHECK_FALSE(rep.thresholds[1].pass);
    CHECK(rep.pass());  // informational rows do not gate
    CHECK(rep.consistent());
  }

  TEST_CASE("a report without gating thresholds or with errors fails") {
    VerificationReport empty;
    empty.check_name = "empty";
    CHECK_FALSE(empty.pass());
    VerificationReport err;
    err.check_name = "err";
    err.add_exact("one", 1);
    err.require_exact("one == 1", "one", Relation::Equal, 1);
    CHECK(err.pass());
    err.record_error(Error(ErrorCode::SizeLimit, "too big"));
    CHECK_FALSE(err.pass());
  }

  TEST_CASE("report JSON round trip") {
    const VerificationReport rep = theorem6_check(1, 1, 7);
    CHECK(rep.pass());
    CHECK(rep.consistent());
    const nlohmann::json j = rep.to_json();
    const VerificationReport back = VerificationReport::from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.consistent());
    nlohmann::json tampered = j;
    tampered["thresholds"][0]["bound"] = 1.0;
    tampered["thresholds"][0]["exact_bound"] = "1/1";
    CHECK_FALSE(VerificationReport::from_json(tampered).consistent());
  }

  TEST_CASE("plot data") {
    std::ostringstream empty;
    emit_plotdata({}, empty);
    CHECK(empty.str() == "check,k,p,depth,constant,value,bound,pass\n");

    VerifyOptions o;
    o.hilbert_samples = 4;
    const VerificationReport h = check_hlower({2, 3}, 1, o);
    std::ostringstream csv;
    emit_plotdata({h}, csv);
    size_t rows_k2 = 0, lines = 0;
    std::istringstream in(csv.str());
    for (std::string line; std::getline(in, line); ++lines) {
      if (line.rfind("hlower,2,", 0) == 0 && line.find("generation") != std::string::npos) ++rows_k2;
    }
    CHECK(rows_k2 == 2);  // generations 0 and 1
    CHECK(lines == h.thresholds.size() + 1);

    const VerificationReport t6 = theorem6_check(1, 2, 11);
    double last = -1.0;
    for (const Threshold& t : t6.thresholds) {
      if (t.constant.rfind("partial sum", 0) != 0) continue;
      const double v = t6.find_constant(t.constant)->value;
      CHECK(v >= last);
      last = v;
    }
  }

  TEST_CASE("report sets sort by check name and parse every accepted shape") {
    ReportSet set;
    for (const char* name : {"sawyer", "contmax", "hlower"}) {
      VerificationReport r;
      r.check_name = name;
      r.add_exact("one", 1);
      r.require_exact("one == 1", "one", Relation::Equal, 1);
      set.reports.push_back(r);
    }
    set.sort();
    CHECK(set.reports[0].check_name == "contmax");
    CHECK(set.reports[2].check_name == "sawyer");
    CHECK(set.pass());
    const nlohmann::json j = set.to_json();
    CHECK(ReportSet::from_json(j).to_json() == j);
    CHECK(ReportSet::from_json(j["reports"]).reports.size() == 3);
    CHECK(ReportSet::from_json(j["reports"][0]).reports.size() == 1);
  }

  TEST_CASE("weighted_integral examples") {
    const PiecewiseMeasure unit({{Interval(0, 1), Rational(1)}});
    const PointFunction one = [](const detail::Point&) { return 1.0; };
    const QuadratureResult r = weighted_integral(one, unit, Interval(0, 1));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-14));
    const LambdaMeasure lambda = build_lambda(2, 1e-10);
    const QuadratureResult a = weighted_integral(one, lambda.measure, Interval(0, 1));
    CHECK(a.value == doctest::Approx(to_double(1 + Rational(4, 9) + Rational(16, 81))).epsilon(1e-15));
  }

  TEST_CASE("weighted_integral of |H w_1|^2 against w_1 matches a graded fixed-mesh oracle") {
    const PiecewiseMeasure w = build_w_k(1, 1, SignRule::Greedy).measure;
    const HilbertField field(w);
    const PointFunction g = [&](const detail::Point& x) {
      const double v = field.at(x).value;
      return v * v;
    };
    const QuadratureResult r = weighted_integral(g, w, Interval(0, 1), QuadratureOptions{1e-12});
    const double oracle = graded_oracle(w, w, 2.0);
    CHECK(std::abs(r.value - oracle) <= 1e-6 * oracle);
  }

  TEST_CASE("contmax and hlower on small k") {
    VerifyOptions o;
    o.samples = 16;
    o.hilbert_samples = 8;
    const VerificationReport c = check_contmax(2, 2, o);
    CHECK(c.pass());
    CHECK(c.find_constant("max M/w on residuals")->value <= 13);
    const VerificationReport h = check_hlower({2, 3}, 2, o);
    CHECK(h.consistent());
    const VerificationReport big = check_contmax(8, 2, o);
    CHECK_FALSE(big.pass());
    REQUIRE(big.errors.size() == 1);
    CHECK(big.errors[0].code == "SizeLimit");
  }

  TEST_CASE("prop41 exact clauses at k=2") {
    VerifyOptions o;
    o.hilbert_samples = 8;
    const VerificationReport r = check_prop_unbddH1({2}, {Rational(2)}, 1, o);
    const Constant* norm = r.find_constant("k=2 norm^p");
    REQUIRE(norm != nullptr);
    CHECK(norm->exact == Rational(1));
    CHECK(r.consistent());
  }

  TEST_CASE("sawyer skips Q with sigma(Q) = 0 and bounds a uniform weight") {
    const PiecewiseMeasure unit({{Interval(0, 1), Rational(1)}});
    const std::vector<Interval> qs{Interval(0, 1), Interval(2, 3), Interval(Rational(1, 4), Rational(3, 4))};
    const VerificationReport r = sawyer_testing(unit, Rational(2), qs);
    CHECK(r.parameters["q_skipped"] == 1);
    CHECK(r.parameters["q_tested"] == 2);
    CHECK(r.pass());
    CHECK(r.find_constant("sup testing ratio")->value == doctest::Approx(1.0));
  }

  TEST_CASE("linearization testing on a uniform weight") {
    const PiecewiseMeasure unit({{Interval(0, 1), Rational(1)}});
    VerifyOptions o;
    o.grid = GridFamily{GridKind::Dyadic, -8, 3};
    const std::vector<Interval> qs{Interval(0, 1), Interval(Rational(1, 3), Rational(2, 3))};
    const VerificationReport r = linearization_testing(unit, {Rational(2), Rational(3, 2)},
                                                       {GridKind::Dyadic, GridKind::Shifted}, qs, o);
    CHECK(r.pass());
    CHECK(r.consistent());
  }

  TEST_CASE("gliding epsilon range") {
    CHECK_THROWS_WITH_AS(gliding_hump_partial(Rational(2), 0.5, 2, 1), "epsilon out of range", Error);
    CHECK_THROWS_WITH_AS(gliding_hump_partial(Rational(2), 1.0, 2, 1), "epsilon out of range", Error);
    const VerificationReport r = gliding_hump_partial(Rational(2), 0.75, 2, 1);
    CHECK(r.find_constant("translation covariance mismatches")->exact == Rational(0));
    CHECK(r.find_constant("norm^p of f")->value == doctest::Approx(1.0 + std::pow(2.0, -1.5)));
  }

  TEST_CASE("default Q-family is deterministic and has positive mass") {
    const PiecewiseMeasure w = build_w_k(2, 1, SignRule::Greedy).measure;
    const auto a = default_q_family(w, 2, 50, 7);
    const auto b = default_q_family(w, 2, 50, 7);
    CHECK(a == b);
    CHECK(default_q_family(w, 2, 50, 8) != a);
    size_t triadic = 0;
    for (const Interval& q : a) {
      if (w.measure_of(q) > 0) ++triadic;
    }
    CHECK(triadic >= a.size() - 50);
  }

  TEST_CASE("reports are deterministic") {
    VerifyOptions o;
    o.hilbert_samples = 4;
    CHECK(check_prop_unbddH1({2}, {Rational(3, 2)}, 1, o).to_json() ==
          check_prop_unbddH1({2}, {Rational(3, 2)}, 1, o).to_json());
  }
}
