#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace nucad {

using Integer = mpz_class;
using Rational = mpq_class;

/// Builds num/den in canonical form (reduced, positive denominator).
Rational make_rational(const Integer& num, const Integer& den = 1);

/// Parses "12", "-3/500" or a decimal literal such as "0.006" or "2.5e-3" exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

int sign(const Rational& r);
int sign(const Integer& z);

Rational abs(const Rational& r);
Integer floor(const Rational& r);
Integer ceil(const Rational& r);

/// Integer power with non-negative exponent.
Rational pow(const Rational& base, std::uint32_t exp);
Integer pow(const Integer& base, std::uint32_t exp);

double to_double(const Rational& r);

/// Smallest k with 2^k > |r| (0 for |r| < 1).
std::uint32_t bit_bound(const Rational& r);

}  // namespace nucad
