#pragma once

#include <cstdint>
#include <vector>

#include "arw/rational.hpp"

namespace arw {

struct LatticePoint {
  long long x{0};
  long long y{0};
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

// Frequency set of an energy level: all integer pairs on the circle of
// radius sqrt(n), plus the half set that indexes independent coefficients.
// Points are kept in lexicographic order; downstream seeding relies on it.
struct LatticeSet {
  long long n{0};
  std::vector<LatticePoint> points;       // all of Lambda_n
  std::vector<LatticePoint> half_points;  // Lambda_n^+: y > 0, plus (sqrt n, 0) if square
  int cardinality{0};                     // N_n = |points|
};

struct LatticeMoments {
  long long sum_l1_sq{0};
  long long sum_l1_4{0};
  long long sum_l1sq_l2sq{0};
  long long sum_l1cub_l2{0};
  long long sum_l1_l2cub{0};
  Rational mu4;
};

long long isqrt_floor(long long v);
bool representable(long long n);

// All integer solutions of l1^2 + l2^2 = n. Throws "not_representable" when
// n has no representation (e.g. primes = 3 mod 4).
LatticeSet decompose(long long n);

// Fourth Fourier coefficient of the spectral measure, as an exact rational:
// mu4 = (1/(n^2 N)) * sum (l1^4 - 6 l1^2 l2^2 + l2^4), always in [-1, 1].
Rational mu_hat4(const LatticeSet& ls);

LatticeMoments moments(const LatticeSet& ls);

struct EtaHit {
  long long n{0};
  int multiplicity{0};
  Rational mu4;
};

// All representable n <= n_max with |mu4 - target| <= tol and N_n >= min_mult,
// sorted by n. Empty result is not an error.
std::vector<EtaHit> search_eta(double target, double tol, long long n_max, int min_mult);

}  // namespace arw
