#ifndef MGN_RATIONAL_HPP
#define MGN_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace mgn {

// All correlator values and recursion coefficients are exact rationals.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

// "p/q" with the denominator always present ("1/1", "-5/3").
std::string to_fraction_string(const Rational& r);

// Shortest exact form: "1", "-5/3".
std::string to_minimal_string(const Rational& r);

// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
Rational rational_from_string(const std::string& text);

double to_double(const Rational& r);

} // namespace mgn

#endif
