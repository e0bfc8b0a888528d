#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

namespace weightlab {

/// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
/// Variable-precision binary float; precision set from WEIGHTLAB_PRECISION_BITS.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Working precision in bits (default 128, overridable by WEIGHTLAB_PRECISION_BITS).
unsigned precision_bits();
void set_precision_bits(unsigned bits);

/// Real constructed at the current working precision.
Real to_real(const Rational& q);
Real make_real(double v);
/// Unit roundoff of the working precision, 2^{1-bits}.
double real_epsilon();

double to_double(const Rational& q);
/// Exact conversion of a finite double.
Rational from_double(double v);
/// Exact conversion of a Real (binary floats are dyadic rationals).
Rational from_real(const Real& v);

/// Parses "p/q", "p" or a decimal literal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);
/// Canonical "p/q" form (always with a denominator, "0/1" for zero).
std::string format_rational(const Rational& q);

Integer floor(const Rational& q);
Rational pow(const Rational& base, long exponent);
inline Rational pow3(long exponent) { return pow(Rational(3), exponent); }
inline Rational pow2(long exponent) { return pow(Rational(2), exponent); }

/// base^exponent when the result is rational, otherwise false.
/// base must be positive.
bool exact_power(const Rational& base, const Rational& exponent, Rational& out);

int sign(const Rational& q);
Rational abs(const Rational& q);

}  // namespace weightlab
