#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>

#include "arw/errors.hpp"

namespace arw {

// Exact rational with 64-bit reduced numerator/denominator. Large enough for
// every lattice moment quotient handled here; construction from __int128
// intermediates reduces before narrowing.
struct Rational {
  long long num{0};
  long long den{1};

  Rational() = default;
  Rational(long long n, long long d = 1) { *this = of(n, d); }

  static Rational of(__int128 n, __int128 d) {
    if (d == 0) fail("bad_rational", "zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a != 0) { n /= a; d /= a; }
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d);
    if (r.num != n || r.den != d) fail("bad_rational", "rational overflow");
    return r;
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.num << "/" << r.den;
  }
};

}  // namespace arw
