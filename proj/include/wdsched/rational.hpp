#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace wdsched {

/// Exact rational used for rates, capacities, slice widths and queue volumes.
using Rational = mpq_class;
using BigInt = mpz_class;

Rational make_rational(std::int64_t num, std::int64_t den = 1);

/// "n/d" or "n" when the denominator is one.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Numerator/denominator pair; throws std::overflow_error when either part does not fit in int64.
std::pair<std::int64_t, std::int64_t> to_pair(const Rational& value);

BigInt floor(const Rational& value);
BigInt ceil(const Rational& value);

/// Best rational approximation of `value` with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
Rational rationalize(double value, std::int64_t max_den);

/// Smallest multiple of 1/den that is >= value.
Rational round_up(const Rational& value, std::int64_t den);

/// Largest rational g such that every argument is an integer multiple of g.
Rational rational_gcd(const Rational& a, const Rational& b);

BigInt lcm(const BigInt& a, const BigInt& b);

/// Narrowing conversion with overflow check.
std::int64_t to_int64(const BigInt& value);

/// Narrowing conversion; throws std::overflow_error beyond 2^120 in magnitude.
__int128 to_int128(const BigInt& value);

BigInt from_int128(__int128 value);

}  // namespace wdsched
