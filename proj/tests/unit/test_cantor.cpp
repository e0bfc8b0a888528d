#include "weightlab/cantor.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"

#include <doctest.h>

#include <cmath>

using namespace weightlab;

TEST_SUITE("cantor") {
  TEST_CASE("intervals and gaps") {
    CHECK(cantor_interval(0, 1) == Interval(0, 1));
    CHECK(cantor_interval(1, 1) == Interval(0, Rational(1, 3)));
    CHECK(cantor_interval(1, 2) == Interval(Rational(2, 3), 1));
    CHECK(cantor_gap(0, 1) == Interval(Rational(1, 3), Rational(2, 3)));
    CHECK(cantor_gap(1, 1) == Interval(Rational(1, 9), Rational(2, 9)));
    for (int r = 0; r <= 4; ++r) {
      for (long l = 1; l <= (1L << r); ++l) CHECK(cantor_gap(r, l) == cantor_interval(r, l).middle_third());
    }
  }

  TEST_CASE("approximants") {
    CHECK(cantor_measure_approx(0) == PiecewiseMeasure({{Interval(0, 1), Rational(1)}}));
    CHECK(cantor_measure_approx(1) == PiecewiseMeasure({{Interval(0, Rational(1, 3)), Rational(3, 2)},
                                                         {Interval(Rational(2, 3), 1), Rational(3, 2)}}));
    const PiecewiseMeasure g = cantor_measure_approx(7);
    CHECK(g.total_mass() == 1);
    for (int r = 0; r <= 7; ++r) {
      for (long l = 1; l <= (1L << r); ++l) CHECK(g.measure_of(cantor_interval(r, l)) == pow2(-r));
    }
    CHECK(g.reflected().translated(1) == g);
    CHECK_THROWS_AS(cantor_measure_approx(30, 20), Error);
  }

  TEST_CASE("H(gamma_R)(1/2) vanishes by symmetry") {
    const TransformValue v = hilbert_exact(cantor_measure_approx(8), Rational(1, 2));
    CHECK(std::abs(v.to_double()) <= 2 * v.error_bound + 1e-30);
  }

  TEST_CASE("find_zero examples") {
    const ZeroEstimate z0 = find_zero(0, 1, 1e-10);
    CHECK(z0.point == Rational(1, 2));
    const ZeroEstimate z = find_zero(1, 1, 1e-10);
    const Interval gap = cantor_gap(1, 1);
    CHECK(gap.a() < z.lo);
    CHECK(z.hi < gap.b());
    CHECK(z.lo <= z.point);
    CHECK(z.point <= z.hi);
    CHECK(to_double(z.hi - z.lo) <= 1e-10);
    // the sampled transform increases across the gap under the 1/(y - x) kernel
    CHECK(z.direction == 1);
  }

  TEST_CASE("zeros are symmetric") {
    for (int r = 1; r <= 2; ++r) {
      for (long l = 1; l <= (1L << r); ++l) {
        const ZeroEstimate a = find_zero(r, l, 1e-10);
        const ZeroEstimate b = find_zero(r, (1L << r) + 1 - l, 1e-10);
        CHECK(std::abs(a.estimate + b.estimate - 1.0) <= 2e-10);
      }
    }
  }

  TEST_CASE("build_lambda masses") {
    const LambdaMeasure l0 = build_lambda(0, 1e-10);
    REQUIRE(l0.measure.atoms().size() == 1);
    CHECK(l0.measure.atoms()[0].position == Rational(1, 2));
    CHECK(l0.measure.atoms()[0].mass == 1);
    const LambdaMeasure l2 = build_lambda(2, 1e-10);
    CHECK(l2.measure.atoms().size() == 7);
    CHECK(l2.measure.total_mass() == 1 + Rational(4, 9) + Rational(16, 81));
    for (const ZeroEstimate& z : l2.zeros) {
      bool found = false;
      for (const Atom& a : l2.measure.atoms()) {
        if (a.position == z.point) {
          found = true;
          CHECK(a.mass == pow(Rational(2, 9), z.r));
        }
      }
      CHECK(found);
    }
  }

  TEST_CASE("theorem6 blocks, small instance") {
    const CantorBlocks b = theorem6_blocks(1, 1, 7);
    REQUIRE(b.blocks.size() == 2);
    for (const CantorBlock& blk : b.blocks) {
      CHECK(blk.certified >= Rational(1, 2));
      CHECK(blk.value >= blk.certified);
      CHECK(blk.witnesses_ok);
      CHECK(blk.min_atom_maximal >= pow(Rational(3, 2), blk.level));
      CHECK(blk.atoms == (size_t(1) << (4 * blk.index)));
    }
    CHECK(b.partial_sums[1] >= b.partial_sums[0]);
    CHECK(b.certified_partial_sums[1] >= 1);
    CHECK_THROWS_AS(theorem6_blocks(1, 1, 5), Error);
  }
}
