#include "arw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "arw/errors.hpp"

namespace arw {

long long isqrt_floor(long long v) {
  if (v < 0) return -1;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

bool representable(long long n) {
  long long root = isqrt_floor(n);
  for (long long a = 0; a <= root; ++a) {
    long long b2 = n - a * a;
    long long b = isqrt_floor(b2);
    if (b * b == b2) return true;
  }
  return false;
}

LatticeSet decompose(long long n) {
  if (n < 1) fail("not_representable", "n must be a positive integer");
  LatticeSet ls;
  ls.n = n;
  long long root = isqrt_floor(n);
  for (long long a = -root; a <= root; ++a) {
    long long b2 = n - a * a;
    long long b = isqrt_floor(b2);
    if (b * b != b2) continue;
    ls.points.push_back({a, b});
    if (b != 0) ls.points.push_back({a, -b});
  }
  if (ls.points.empty())
    fail("not_representable", "n = " + std::to_string(n) + " is not a sum of two squares");
  std::sort(ls.points.begin(), ls.points.end());
  ls.cardinality = static_cast<int>(ls.points.size());
  for (const auto& p : ls.points)
    if (p.y > 0) ls.half_points.push_back(p);
  if (root * root == n) ls.half_points.push_back({root, 0});
  std::sort(ls.half_points.begin(), ls.half_points.end());
  return ls;
}

Rational mu_hat4(const LatticeSet& ls) {
  __int128 s = 0;
  for (const auto& p : ls.points) {
    __int128 x2 = static_cast<__int128>(p.x) * p.x;
    __int128 y2 = static_cast<__int128>(p.y) * p.y;
    s += x2 * x2 - 6 * x2 * y2 + y2 * y2;
  }
  __int128 den = static_cast<__int128>(ls.n) * ls.n * ls.cardinality;
  return Rational::of(s, den);
}

LatticeMoments moments(const LatticeSet& ls) {
  LatticeMoments mo;
  __int128 s2 = 0, s4 = 0, s22 = 0, s31 = 0, s13 = 0;
  for (const auto& p : ls.points) {
    __int128 x = p.x, y = p.y;
    s2 += x * x;
    s4 += x * x * x * x;
    s22 += x * x * y * y;
    s31 += x * x * x * y;
    s13 += x * y * y * y;
  }
  mo.sum_l1_sq = static_cast<long long>(s2);
  mo.sum_l1_4 = static_cast<long long>(s4);
  mo.sum_l1sq_l2sq = static_cast<long long>(s22);
  mo.sum_l1cub_l2 = static_cast<long long>(s31);
  mo.sum_l1_l2cub = static_cast<long long>(s13);
  mo.mu4 = mu_hat4(ls);
  return mo;
}

std::vector<EtaHit> search_eta(double target, double tol, long long n_max, int min_mult) {
  if (tol <= 0 && tol != 0.0) fail("bad_config", "tol must be nonnegative");
  std::vector<EtaHit> hits;
  for (long long n = 1; n <= n_max; ++n) {
    if (!representable(n)) continue;
    LatticeSet ls = decompose(n);
    if (ls.cardinality < min_mult) continue;
    Rational m4 = mu_hat4(ls);
    if (std::abs(m4.to_double() - target) <= tol)
      hits.push_back({n, ls.cardinality, m4});
  }
  return hits;
}

}  // namespace arw
