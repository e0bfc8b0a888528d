#include "weightlab/cantor.hpp"

#include "weightlab/errors.hpp"
#include "weightlab/hilbert.hpp"
#include "weightlab/maximal.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace weightlab {

namespace {

void check_index(int r, long l) {
  if (r < 0 || r > 62) fail(ErrorCode::InvalidArgument, "Cantor level out of range");
  if (l < 1 || l > (1L << r)) fail(ErrorCode::InvalidArgument, "Cantor index out of range");
}

Rational interval_start(int r, long l) {
  Rational a = 0;
  for (int i = 0; i < r; ++i) {
    if (((l - 1) >> (r - 1 - i)) & 1) a += 2 * pow3(-(i + 1));
  }
  return a;
}

/// Sign of H(mu)(x) from the fast field, confirmed in high precision when
/// the fast value is within its error bound of zero. 0 means no certified sign.
int transform_sign(const HilbertField& field, const PiecewiseMeasure& mu, const Rational& x, double* value) {
  const HilbertField::Value v = field.at(x);
  if (v.kind != TransformKind::Finite) {
    *value = v.value;
    return v.kind == TransformKind::PlusInfinity ? 1 : -1;
  }
  *value = v.value;
  if (std::abs(v.value) > v.error_bound) return v.value > 0 ? 1 : -1;
  const TransformValue exact = hilbert_exact(mu, x);
  *value = exact.to_double();
  const double ev = exact.value.convert_to<double>();
  if (std::abs(ev) > exact.error_bound) return ev > 0 ? 1 : -1;
  return 0;
}

}  // namespace

Interval cantor_interval(int r, long l) {
  check_index(r, l);
  const Rational a = interval_start(r, l);
  return {a, a + pow3(-r)};
}

Interval cantor_gap(int r, long l) {
  check_index(r, l);
  const Rational a = interval_start(r, l);
  const Rational third = pow3(-(r + 1));
  return {a + third, a + 2 * third};
}

PiecewiseMeasure cantor_measure_approx(int R, int level_cap) {
  if (R < 0) fail(ErrorCode::InvalidArgument, "R must be >= 0");
  if (R > level_cap) {
    fail(ErrorCode::SizeLimit, "gamma_" + std::to_string(R) + " needs 2^" + std::to_string(R) + " pieces (cap 2^" +
                                   std::to_string(level_cap) + ")");
  }
  const Rational density = pow(Rational(3, 2), R);
  std::vector<Piece> pieces;
  pieces.reserve(size_t(1) << R);
  for (long l = 1; l <= (1L << R); ++l) pieces.push_back({cantor_interval(R, l), density});
  return PiecewiseMeasure(std::move(pieces));
}

ZeroEstimate find_zero_at(int r, long l, int R, double tol, int samples) {
  check_index(r, l);
  if (R < r + 1) fail(ErrorCode::InvalidArgument, "approximation level must exceed the gap level");
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tolerance must be positive");
  if (samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
  const PiecewiseMeasure gamma = cantor_measure_approx(R);
  const HilbertField field(gamma);
  const Interval gap = cantor_gap(r, l);

  // endpoint limits, then interior samples
  std::vector<Rational> xs{gap.a()};
  const Rational step = gap.length() / samples;
  for (int s = 0; s < samples; ++s) xs.push_back(gap.a() + step * Rational(2 * s + 1, 2));
  xs.push_back(gap.b());
  std::vector<int> signs;
  std::vector<double> values;
  for (const Rational& x : xs) {
    double v = 0.0;
    signs.push_back(transform_sign(field, gamma, x, &v));
    values.push_back(v);
  }

  ZeroEstimate out;
  out.r = r;
  out.l = l;
  out.levels_used = R;
  bool up = true, down = true;
  for (size_t i = 2; i + 1 < values.size(); ++i) {
    up = up && values[i] > values[i - 1];
    down = down && values[i] < values[i - 1];
  }
  out.direction = up ? 1 : (down ? -1 : 0);

  int changes = 0;
  int last = 0;
  std::optional<size_t> exact_sample;
  size_t bracket = 0;
  for (size_t i = 0; i < signs.size(); ++i) {
    if (signs[i] == 0) {
      exact_sample = i;
      continue;
    }
    if (last != 0 && signs[i] != last) {
      ++changes;
      bracket = i;
    }
    last = signs[i];
  }
  if (changes != 1 || out.direction == 0 || signs.front() == 0 || signs.back() == 0) {
    fail(ErrorCode::MonotonicityViolation, "H(gamma_" + std::to_string(R) + ") is not monotone with one sign change on G^" +
                                               std::to_string(r) + "_" + std::to_string(l));
  }
  if (exact_sample) {
    out.lo = out.hi = out.point = xs[*exact_sample];
    out.exact_zero = true;
    out.estimate = to_double(out.point);
    return out;
  }

  Rational lo = xs[bracket - 1];
  Rational hi = xs[bracket];
  const int sign_lo = signs[bracket - 1];
  const Rational width = from_double(tol);
  while (hi - lo > width) {
    const Rational mid = (lo + hi) / 2;
    double v = 0.0;
    const int s = transform_sign(field, gamma, mid, &v);
    if (s == 0) {
      lo = hi = mid;
      out.exact_zero = true;
      break;
    }
    if (s == sign_lo) lo = mid;
    else hi = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.point = (lo + hi) / 2;
  out.estimate = to_double(out.point);
  return out;
}

ZeroEstimate find_zero(int r, long l, double tol, const FindZeroOptions& options) {
  std::optional<ZeroEstimate> previous;
  for (int R = std::max(options.r_start, r + 2); R <= options.r_limit; R += 2) {
    ZeroEstimate z = find_zero_at(r, l, R, tol, options.samples);
    if (previous && std::abs(z.estimate - previous->estimate) <= tol) return z;
    previous = std::move(z);
  }
  fail(ErrorCode::NoConvergence, "zero in G^" + std::to_string(r) + "_" + std::to_string(l) +
                                     " not stable up to R = " + std::to_string(options.r_limit));
}

LambdaMeasure build_lambda(int r_max, double tol, const FindZeroOptions& options) {
  if (r_max < 0 || r_max > 16) fail(ErrorCode::InvalidArgument, "r_max out of range");
  LambdaMeasure out;
  std::vector<Atom> atoms;
  for (int r = 0; r <= r_max; ++r) {
    const Rational mass = pow(Rational(2, 9), r);
    for (long l = 1; l <= (1L << r); ++l) {
      ZeroEstimate z = find_zero(r, l, tol, options);
      atoms.push_back({z.point, mass});
      out.zeros.push_back(std::move(z));
    }
  }
  out.measure = PiecewiseMeasure({}, std::move(atoms));
  return out;
}

CantorBlocks theorem6_blocks(int r, int T, int R, size_t atom_cap) {
  if (r < 0 || T < 0) fail(ErrorCode::InvalidArgument, "r and T must be >= 0");
  if (R < r + 4 * T + 2) fail(ErrorCode::InvalidArgument, "R must be at least r + 4T + 2");
  if (4 * T >= 62 || (size_t(1) << (4 * T)) > atom_cap) {
    fail(ErrorCode::SizeLimit, "block " + std::to_string(T) + " needs 2^" + std::to_string(4 * T) + " atoms");
  }
  const PiecewiseMeasure gamma = cantor_measure_approx(R);
  const Interval base = cantor_interval(r, 1);
  const MaximalProfile profile(gamma.restricted(base));
  const PiecewiseMeasure& local = profile.measure();

  CantorBlocks out;
  out.r = r;
  out.T = T;
  out.R = R;
  Rational running = 0, running_cert = 0;
  for (int i = 0; i <= T; ++i) {
    CantorBlock block;
    block.index = i;
    block.level = r + 4 * i;
    block.atoms = size_t(1) << (4 * i);
    const int n = block.level;
    const Rational mass = pow(Rational(2, 9), n);
    const Rational expected = pow(Rational(3, 2), n);
    const double tol = to_double(pow3(-(n + 1))) * 1e-6;
    block.value = 0;
    block.certified = 0;
    for (long s = 1; s <= static_cast<long>(block.atoms); ++s) {
      const ZeroEstimate z = find_zero_at(n, s, R, tol);
      const Interval witness = cantor_interval(n, s);
      const Rational witness_avg = local.measure_of(witness) / witness.length();
      const Rational m = profile.value_at(z.point);
      const Interval gap = cantor_gap(n, s);
      if (!(gap.a() < z.point && z.point < gap.b()) || witness_avg != expected || m < witness_avg) {
        block.witnesses_ok = false;
      }
      if (s == 1 || m < block.min_atom_maximal) block.min_atom_maximal = m;
      block.value += m * m * mass;
      block.certified += witness_avg * witness_avg * mass;
    }
    running += block.value;
    running_cert += block.certified;
    out.partial_sums.push_back(running);
    out.certified_partial_sums.push_back(running_cert);
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace weightlab
