#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/triadic.hpp"

#include <doctest.h>

#include <cmath>

using namespace weightlab;

TEST_SUITE("triadic-construction") {
  TEST_CASE("k=1 depth=1 geometry") {
    const TriadicTree t = build_tree(1, 1, SignRule::Greedy);
    REQUIRE(t.generations.size() == 2);
    REQUIRE(t.generations[0].size() == 1);
    const ResidualRecord& top = t.generations[0][0];
    CHECK(top.j == Interval(Rational(1, 3), Rational(2, 3)));
    CHECK(top.sign == 1);
    CHECK(top.residual == Interval(0, Rational(1, 3)));
    REQUIRE(t.generations[1].size() == 1);
    CHECK(t.generations[1][0].residual.length() == Rational(1, 9));
  }

  TEST_CASE("k=2 depth=1: three cells of length 1/9 inside the middle third") {
    const TriadicTree t = build_tree(2, 1, SignRule::Greedy);
    REQUIRE(t.generations[1].size() == 3);
    for (const ResidualRecord& r : t.generations[1]) {
      const Interval k = r.parent_cell();
      CHECK(k.length() == Rational(1, 9));
      CHECK(Interval(Rational(1, 3), Rational(2, 3)).contains(k));
    }
  }

  TEST_CASE("depth=0: single J with residual 3^-k") {
    for (int k = 1; k <= 5; ++k) {
      const Construction c = build_w_k(k, 0, SignRule::Greedy);
      REQUIRE(c.tree.generations.size() == 1);
      const ResidualRecord& r = c.tree.generations[0][0];
      CHECK(r.j == Interval(Rational(1, 3), Rational(2, 3)));
      CHECK(r.residual.length() == pow3(-k));
      const Rational d = 1 / (Rational(1, 3) + pow3(-k));
      CHECK(c.measure.density_at(Rational(1, 2)) == d);
      CHECK(c.measure.density_at(r.residual.center()) == d);
      CHECK(c.measure.total_mass() == 1);
    }
    const Construction one = build_w_k(1, 0, SignRule::Greedy);
    CHECK(one.measure == PiecewiseMeasure({{Interval(0, Rational(2, 3)), Rational(3, 2)}}));
  }

  TEST_CASE("select_sign examples") {
    const Interval j(Rational(1, 3), Rational(2, 3));
    CHECK(select_sign(PiecewiseMeasure(), j) == 1);
    const PiecewiseMeasure mirror({{Interval(0, Rational(1, 6)), Rational(1)}, {Interval(Rational(5, 6), 1), Rational(1)}});
    CHECK(select_sign(mirror, j) == 1);
    // kernel 1/(y - x): mass on the left gives H < 0 at the centre of J
    const PiecewiseMeasure left({{Interval(0, Rational(1, 6)), Rational(1)}});
    CHECK(hilbert_exact(left, j.center()).to_double() < 0);
    CHECK(hilbert_quadrature_oracle(left, j.center(), 1e-12).to_double() < 0);
    CHECK(select_sign(left, j) == -1);
    const PiecewiseMeasure right({{Interval(Rational(5, 6), 1), Rational(1)}});
    CHECK(select_sign(right, j) == 1);
  }

  TEST_CASE("fixed sign rules") {
    const TriadicTree plus = build_tree(3, 2, SignRule::AllPlus);
    const TriadicTree minus = build_tree(3, 2, SignRule::AllMinus);
    for (const auto& gen : plus.generations)
      for (const ResidualRecord& r : gen) CHECK((r.sign == 1 && r.residual.b() == r.j.a()));
    for (const auto& gen : minus.generations)
      for (const ResidualRecord& r : gen) CHECK((r.sign == -1 && r.residual.a() == r.j.b()));
    CHECK(parse_sign_rule("all-minus") == SignRule::AllMinus);
    CHECK_THROWS_AS(parse_sign_rule("sideways"), Error);
  }

  TEST_CASE("tree invariants, k in 1..4, depth 2") {
    for (int k = 1; k <= 4; ++k) {
      const Construction c = build_w_k(k, 2, SignRule::Greedy);
      const TriadicTree& t = c.tree;
      CHECK(t.residual_count() == static_cast<size_t>(residual_count_estimate(k, 2)));
      for (size_t i = 0; i < t.generations.size(); ++i) {
        CHECK(t.generations[i].size() == static_cast<size_t>(std::llround(std::pow(3.0, (k - 1.0) * i))));
        for (const ResidualRecord& r : t.generations[i]) {
          const Interval cell = r.parent_cell();
          CHECK(cell.length() == t.cell_length(static_cast<int>(i)));
          CHECK(r.j == cell.middle_third());
          CHECK(r.residual.length() == t.residual_length(static_cast<int>(i)));
          CHECK(cell.contains(r.residual));
          CHECK_FALSE(r.residual.intersects(r.j));
          CHECK((r.sign == 1 ? r.residual.b() == r.j.a() : r.residual.a() == r.j.b()));
          if (i + 1 < t.generations.size()) CHECK(r.residual.length() == t.cell_length(static_cast<int>(i + 1)));
        }
      }
      // residuals pairwise disjoint
      std::vector<Interval> all;
      for (const ResidualSupport& s : residual_supports(t)) all.push_back(s.residual);
      std::sort(all.begin(), all.end(), [](const Interval& x, const Interval& y) { return x.a() < y.a(); });
      for (size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].b() <= all[i].a());
    }
  }

  TEST_CASE("mass conservation per cell and uniform final blocks") {
    for (int k = 2; k <= 3; ++k) {
      const Construction c = build_w_k(k, 2, SignRule::Greedy);
      CHECK(c.measure.total_mass() == 1);
      REQUIRE(c.cell_mass.size() == c.tree.generations.size());
      for (size_t i = 0; i < c.tree.generations.size(); ++i) {
        for (const ResidualRecord& r : c.tree.generations[i]) {
          const Interval cell = r.parent_cell();
          CHECK(c.measure.measure_of(cell) == c.cell_mass[i]);
          if (i + 1 == c.tree.generations.size()) {
            // final generation: uniform on K^m u I(K^m)
            const Rational d = c.cell_mass[i] / (r.j.length() + r.residual.length());
            CHECK(c.block_density[i] == d);
            CHECK(c.measure.density_at(r.j.center()) == d);
            CHECK(c.measure.density_at(r.residual.center()) == d);
          }
        }
      }
      // equal densities on the residuals of one generation
      for (const auto& gen : c.tree.generations) {
        const Rational d0 = c.measure.density_at(gen.front().residual.center());
        for (const ResidualRecord& r : gen) CHECK(c.measure.density_at(r.residual.center()) == d0);
      }
    }
  }

  TEST_CASE("residual_supports k=1 depth=0") {
    const auto s = residual_supports(build_tree(1, 0, SignRule::Greedy));
    REQUIRE(s.size() == 1);
    CHECK(s[0].j == Interval(Rational(1, 3), Rational(2, 3)));
    CHECK(s[0].residual == Interval(0, Rational(1, 3)));
    CHECK(s[0].residual_middle == Interval(Rational(1, 9), Rational(2, 9)));
  }

  TEST_CASE("determinism and size limit") {
    CHECK(build_tree(3, 2, SignRule::Greedy) == build_tree(3, 2, SignRule::Greedy));
    CHECK(build_w_k(3, 2, SignRule::Greedy).measure == build_w_k(3, 2, SignRule::Greedy).measure);
    try {
      (void)build_w_k(8, 2, SignRule::Greedy);
      FAIL("expected SizeLimit");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SizeLimit);
    }
    CHECK(residual_count_estimate(8, 2) == 1 + 2187 + 2187.0 * 2187);
  }

  TEST_CASE("hilbert_ratio_on_residuals k=1 depth=0 is finite and positive") {
    const Construction c = build_w_k(1, 0, SignRule::Greedy);
    const HilbertRatioReport r = hilbert_ratio_on_residuals(c.tree, c.measure, 8);
    CHECK(std::isfinite(r.global_min));
    CHECK(r.global_min > 0);
    CHECK(r.evaluations == 8);
    CHECK(r.global_min_over_k == doctest::Approx(r.global_min));
  }

  TEST_CASE("tree JSON lists generations, residuals and signs") {
    const nlohmann::json j = tree_to_json(build_tree(1, 1, SignRule::Greedy));
    CHECK(j["depth"] == 1);
    REQUIRE(j["generations"].size() == 2);
    CHECK(j["generations"][0]["residuals"][0]["I"][1] == "1/3");
    CHECK(j["generations"][0]["residuals"][0]["sign"] == 1);
  }
}
