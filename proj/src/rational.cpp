#include "wdsched/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace wdsched {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  Rational r(BigInt(std::to_string(num)), BigInt(std::to_string(den)));
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) {
    return value.get_num().get_str();
  }
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

std::int64_t to_int64(const BigInt& value) {
  if (!value.fits_slong_p()) {
    throw std::overflow_error("integer does not fit in int64: " + value.get_str());
  }
  return static_cast<std::int64_t>(value.get_si());
}

__int128 to_int128(const BigInt& value) {
  if (mpz_sizeinbase(value.get_mpz_t(), 2) > 120) {
    throw std::overflow_error("integer exceeds the 120-bit quantum range: " + value.get_str());
  }
  BigInt mag = abs(value);
  BigInt hi = mag >> 64;
  BigInt lo = mag - (hi << 64);
  auto part = [](const BigInt& v) {
    unsigned long long out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
  };
  __int128 r = (static_cast<__int128>(part(hi)) << 64) | static_cast<__int128>(part(lo));
  return value < 0 ? -r : r;
}

BigInt from_int128(__int128 value) {
  bool neg = value < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(value) : static_cast<unsigned __int128>(value);
  unsigned long long words[2] = {static_cast<unsigned long long>(mag),
                                 static_cast<unsigned long long>(mag >> 64)};
  BigInt r;
  mpz_import(r.get_mpz_t(), 2, -1, sizeof(unsigned long long), 0, 0, words);
  return neg ? BigInt(-r) : r;
}

std::pair<std::int64_t, std::int64_t> to_pair(const Rational& value) {
  return {to_int64(value.get_num()), to_int64(value.get_den())};
}

BigInt floor(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Rational rationalize(double value, std::int64_t max_den) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("cannot rationalize a non-finite value");
  }
  if (max_den < 1) {
    throw std::invalid_argument("rationalize: max_den must be positive");
  }
  // Exact binary value of the double, then best approximation via convergents.
  Rational exact(value);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational x = exact;
  const BigInt bound(std::to_string(max_den));
  for (;;) {
    BigInt a = floor(x);
    BigInt q2 = q0 + a * q1;
    if (q2 > bound) {
      // Semiconvergent: the largest admissible step toward the next convergent.
      BigInt step = (bound - q0) / q1;
      Rational semi(p0 + step * p1, q0 + step * q1);
      semi.canonicalize();
      Rational conv(p1, q1);
      conv.canonicalize();
      return abs(semi - exact) < abs(conv - exact) ? semi : conv;
    }
    BigInt p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = x - Rational(a);
    if (frac == 0) {
      break;
    }
    x = 1 / frac;
  }
  Rational r(p1, q1);
  r.canonicalize();
  return r;
}

Rational round_up(const Rational& value, std::int64_t den) {
  Rational scaled = value * make_rational(den);
  Rational r(ceil(scaled), BigInt(std::to_string(den)));
  r.canonicalize();
  return r;
}

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return abs(b);
  if (b == 0) return abs(a);
  // gcd(p/q, r/s) = gcd(p*s, r*q) / (q*s)
  BigInt num;
  BigInt lhs = a.get_num() * b.get_den();
  BigInt rhs = b.get_num() * a.get_den();
  mpz_gcd(num.get_mpz_t(), lhs.get_mpz_t(), rhs.get_mpz_t());
  Rational g(num, a.get_den() * b.get_den());
  g.canonicalize();
  return g;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace wdsched
