#ifndef SMTLAB_RATIONAL_HPP
#define SMTLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace smtlab
{

using Integer = mpz_class;
// mpq_class keeps values canonical (reduced, positive denominator) after
// every arithmetic operation.
using Rational = mpq_class;

// Accepts "3", "-3/4", "0.125", "1e-3", "2.5E2".
Rational parse_rational(std::string_view text);

std::string to_string(const Integer &z);
std::string to_string(const Rational &q);

Integer floor_of(const Rational &q);
Integer ceil_of(const Rational &q);

Rational pow(const Rational &base, unsigned long exponent);
Integer pow(const Integer &base, unsigned long exponent);

Integer factorial(unsigned long n);
Integer binomial(long n, long k);

double to_double(const Rational &q);

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace smtlab

#endif
