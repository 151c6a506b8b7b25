#pragma once

// Exact rational scalar used for breakpoints, values, masses and averages.

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace maxbound {

using Rational = mpq_class;

/// n/d in canonical form. GMP's two-argument constructor does not reduce,
/// and its arithmetic assumes reduced operands.
inline Rational ratio(long n, long d) {
  if (d == 0) throw std::invalid_argument("ratio: zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Parses `p/q` or an integer. Throws std::invalid_argument on malformed text
/// or a zero denominator.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  std::string s(text);
  auto slash = s.find('/');
  auto digits_ok = [](std::string_view d, bool allow_sign) {
    if (d.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (d[0] == '-' || d[0] == '+')) i = 1;
    if (i == d.size()) return false;
    for (; i < d.size(); ++i)
      if (d[i] < '0' || d[i] > '9') return false;
    return true;
  };
  if (slash == std::string::npos) {
    if (!digits_ok(s, true)) throw std::invalid_argument("bad rational literal: " + s);
  } else {
    std::string_view num(s.data(), slash);
    std::string_view den(s.data() + slash + 1, s.size() - slash - 1);
    if (!digits_ok(num, true) || !digits_ok(den, false))
      throw std::invalid_argument("bad rational literal: " + s);
  }
  if (s[0] == '+') s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

/// Exact conversion; every finite double is a dyadic rational.
inline Rational from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  return Rational(x);
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Correctly rounded to within a couple of ulps of long double.
inline long double to_long_double(const Rational& q) {
  // Split off the leading 53 bits so the remainder keeps extra precision.
  double hi = q.get_d();
  Rational rest = q - Rational(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

/// Largest multiple of 2^-bits not exceeding q.
inline Rational floor_dyadic(const Rational& q, unsigned bits) {
  mpz_class scaled = q.get_num();
  scaled <<= bits;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  mpz_class den = 1;
  den <<= bits;
  Rational out(fl, den);
  out.canonicalize();
  return out;
}

}  // namespace maxbound
