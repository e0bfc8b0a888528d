#include "weightlab/rational.hpp"

#include "weightlab/errors.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <mutex>

namespace weightlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AtomAtPoint: return "AtomAtPoint";
    case ErrorCode::AtomicPart: return "AtomicPart";
    case ErrorCode::NonRationalPower: return "NonRationalPower";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ScaleRange: return "ScaleRange";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

unsigned g_bits = 0;
std::once_flag g_bits_once;

void init_bits() {
  std::call_once(g_bits_once, [] {
    unsigned bits = 128;
    if (const char* env = std::getenv("WEIGHTLAB_PRECISION_BITS")) {
      unsigned parsed = 0;
      std::string_view sv(env);
      auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), parsed);
      if (ec == std::errc() && ptr == sv.data() + sv.size() && parsed >= 53 && parsed <= 65536) {
        bits = parsed;
      }
    }
    if (g_bits == 0) g_bits = bits;
    Real::default_precision(static_cast<unsigned>(std::ceil(g_bits * 0.30102999566398120)) + 1);
  });
}

}  // namespace

unsigned precision_bits() {
  init_bits();
  return g_bits;
}

void set_precision_bits(unsigned bits) {
  if (bits < 53) fail(ErrorCode::InvalidArgument, "precision must be at least 53 bits");
  init_bits();
  g_bits = bits;
  Real::default_precision(static_cast<unsigned>(std::ceil(g_bits * 0.30102999566398120)) + 1);
}

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_prec(r.backend().data(), precision_bits());
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

Real make_real(double v) {
  Real r;
  mpfr_set_prec(r.backend().data(), precision_bits());
  mpfr_set_d(r.backend().data(), v, MPFR_RNDN);
  return r;
}

double real_epsilon() { return std::ldexp(1.0, 1 - static_cast<int>(precision_bits())); }

double to_double(const Rational& q) { return mpq_get_d(q.backend().data()); }

Rational from_double(double v) {
  if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "cannot convert non-finite double to rational");
  Rational q;
  mpq_set_d(q.backend().data(), v);
  return q;
}

Rational from_real(const Real& v) {
  const mpfr_srcptr x = v.backend().data();
  if (!mpfr_number_p(x)) fail(ErrorCode::InvalidArgument, "cannot convert non-finite float to rational");
  Rational q;
  if (mpfr_zero_p(x)) return q;
  mpz_t mant;
  mpz_init(mant);
  const mpfr_exp_t e = mpfr_get_z_2exp(mant, x);
  mpq_set_z(q.backend().data(), mant);
  mpz_clear(mant);
  if (e > 0) {
    mpq_mul_2exp(q.backend().data(), q.backend().data(), static_cast<mp_bitcnt_t>(e));
  } else if (e < 0) {
    mpq_div_2exp(q.backend().data(), q.backend().data(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) fail(ErrorCode::Parse, "empty rational literal");
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) fail(ErrorCode::Parse, "bad rational literal '" + s + "'");
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const long frac = static_cast<long>(s.size() - dot - 1);
      if (digits.empty() || digits == "-" || digits == "+") fail(ErrorCode::Parse, "bad rational literal '" + s + "'");
      if (digits[0] == '+') digits.erase(0, 1);
      const Rational q{Integer(digits)};
      return q / pow(Rational(10), frac);
    }
    std::string t = s;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    if (const auto slash = t.find('/'); slash != std::string::npos && Integer(t.substr(slash + 1)) == 0) {
      fail(ErrorCode::Parse, "zero denominator in '" + s + "'");
    }
    Rational q(t);
    return q;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(ErrorCode::Parse, "bad rational literal '" + s + "'");
  }
}

std::string format_rational(const Rational& q) {
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

Integer floor(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.backend().data(), mpq_numref(q.backend().data()), mpq_denref(q.backend().data()));
  return out;
}

Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) fail(ErrorCode::InvalidArgument, "zero to a negative power");
    return Rational(1) / pow(base, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.backend().data(), mpq_numref(base.backend().data()), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.backend().data(), mpq_denref(base.backend().data()), static_cast<unsigned long>(exponent));
  return Rational(num, den);
}

bool exact_power(const Rational& base, const Rational& exponent, Rational& out) {
  if (base <= 0) fail(ErrorCode::InvalidArgument, "exact_power requires a positive base");
  const Integer p = boost::multiprecision::numerator(exponent);
  const Integer q = boost::multiprecision::denominator(exponent);
  if (q > 1u << 20 || abs(Rational(p)) > Rational(1u << 20)) return false;
  const unsigned long root = q.convert_to<unsigned long>();
  Integer num, den;
  const int num_exact = mpz_root(num.backend().data(), mpq_numref(base.backend().data()), root);
  const int den_exact = mpz_root(den.backend().data(), mpq_denref(base.backend().data()), root);
  if (!num_exact || !den_exact) return false;
  out = pow(Rational(num, den), p.convert_to<long>());
  return true;
}

int sign(const Rational& q) { return mpq_sgn(q.backend().data()); }

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace weightlab
