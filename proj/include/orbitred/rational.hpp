#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace orbitred {

// Arbitrary-precision rationals. GMP keeps every mpq_class canonical
// (reduced, positive denominator) after each arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);
// q - floor(q), always in [0, 1).
Rational frac(const Rational& q);
Rational abs_of(const Rational& q);

// Accepts "a/b", "a" and finite decimals "-1.25". Throws Error(ParseError).
Rational parse_rational(std::string_view text);
// Always "num/den", e.g. "5/1", "-3/4".
std::string to_string(const Rational& q);

// Stable 64-bit fingerprint of a rational (FNV-1a over the canonical string).
std::uint64_t fingerprint(const Rational& q, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace orbitred
