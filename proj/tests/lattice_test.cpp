#include <doctest.h>

#include <algorithm>
#include <set>

#include "arw/errors.hpp"
#include "arw/lattice.hpp"

using namespace arw;

namespace {

// Independent multiplicity oracle: r2(n) = 4 (d1(n) - d3(n)) via factorization.
// Zero when a prime = 3 mod 4 appears with odd exponent.
int r2_oracle(long long n) {
  int count = 4;
  long long rest = n;
  for (long long p = 2; p * p <= rest; ++p) {
    if (rest % p) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (p % 4 == 1) count *= e + 1;
    if (p % 4 == 3 && (e % 2)) return 0;
  }
  if (rest > 1) {
    if (rest % 4 == 1) count *= 2;
    if (rest % 4 == 3) return 0;
  }
  return count;
}

bool contains(const LatticeSet& ls, long long x, long long y) {
  return std::find(ls.points.begin(), ls.points.end(), LatticePoint{x, y}) != ls.points.end();
}

}  // namespace

TEST_CASE("decompose enumerates the circle exactly") {
  LatticeSet ls = decompose(5);
  CHECK(ls.cardinality == 8);
  for (long long sx : {-1, 1})
    for (long long sy : {-1, 1}) {
      CHECK(contains(ls, sx * 1, sy * 2));
      CHECK(contains(ls, sx * 2, sy * 1));
    }
  CHECK(ls.half_points.size() == 4);
  CHECK(std::is_sorted(ls.points.begin(), ls.points.end()));

  LatticeSet one = decompose(1);
  CHECK(one.cardinality == 4);
  CHECK(contains(one, 1, 0));
  CHECK(contains(one, 0, -1));
  // (sqrt n, 0) joins the half set when n is a perfect square
  CHECK(one.half_points == std::vector<LatticePoint>{{0, 1}, {1, 0}});
}

TEST_CASE("non-representable n raises not_representable") {
  CHECK_THROWS_AS(decompose(3), Error);
  try {
    decompose(3);
  } catch (const Error& e) {
    CHECK(e.code() == "not_representable");
  }
  CHECK_THROWS_AS(decompose(7), Error);
  CHECK_THROWS_AS(decompose(0), Error);
}

TEST_CASE("point set symmetries") {
  for (long long n : {2, 5, 25, 65, 325}) {
    LatticeSet ls = decompose(n);
    for (const auto& p : ls.points) {
      CHECK(p.x * p.x + p.y * p.y == n);
      CHECK(contains(ls, -p.x, -p.y));
      CHECK(contains(ls, -p.y, p.x));
      CHECK(contains(ls, p.x, -p.y));
    }
    CHECK(static_cast<int>(ls.points.size()) == 2 * static_cast<int>(ls.half_points.size()));
    CHECK(ls.cardinality % 4 == 0);
  }
}

TEST_CASE("mu_hat4 exact values") {
  CHECK(mu_hat4(decompose(2)) == Rational(-1));
  CHECK(mu_hat4(decompose(1)) == Rational(1));
  CHECK(mu_hat4(decompose(5)) == Rational(-7, 25));
  CHECK(mu_hat4(decompose(4)) == Rational(1));
  CHECK(mu_hat4(decompose(8)) == Rational(-1));
}

TEST_CASE("moment identities hold exactly") {
  LatticeMoments m5 = moments(decompose(5));
  CHECK(m5.sum_l1_sq == 20);  // 5 * 8 / 2
  CHECK(m5.sum_l1_4 == 68);
  CHECK(m5.sum_l1cub_l2 == 0);
  CHECK(m5.sum_l1_l2cub == 0);

  for (long long n = 1; n <= 500; ++n) {
    if (!representable(n)) continue;
    LatticeSet ls = decompose(n);
    LatticeMoments mo = moments(ls);
    const long long N = ls.cardinality;
    CHECK(2 * mo.sum_l1_sq == n * N);
    CHECK(mo.sum_l1cub_l2 == 0);
    CHECK(mo.sum_l1_l2cub == 0);
    // 8 sum l1^4 = n^2 N (3 + mu4) and 8 sum l1^2 l2^2 = n^2 N (1 - mu4), exactly
    const __int128 scale = static_cast<__int128>(n) * n * N;
    CHECK(static_cast<__int128>(mo.sum_l1_4) * 8 * mo.mu4.den ==
          scale * (3 * mo.mu4.den + mo.mu4.num));
    CHECK(static_cast<__int128>(mo.sum_l1sq_l2sq) * 8 * mo.mu4.den ==
          scale * (mo.mu4.den - mo.mu4.num));
    CHECK(std::abs(mo.mu4.to_double()) <= 1.0);
    CHECK(ls.cardinality == r2_oracle(n));
  }
}

TEST_CASE("search_eta finds the expected levels") {
  auto at_minus_one = search_eta(-1.0, 0.0, 10, 4);
  std::set<long long> found;
  for (const auto& h : at_minus_one) found.insert(h.n);
  CHECK(found.count(2) == 1);
  CHECK(found.count(8) == 1);

  auto at_one = search_eta(1.0, 0.0, 10, 4);
  found.clear();
  for (const auto& h : at_one) found.insert(h.n);
  CHECK(found.count(1) == 1);
  CHECK(found.count(4) == 1);

  auto near_zero = search_eta(0.0, 0.3, 100, 8);
  bool has5 = false;
  for (const auto& h : near_zero) has5 |= (h.n == 5);
  CHECK(has5);

  // results sorted by n; empty results are fine
  auto all = search_eta(0.0, 1.0, 200, 4);
  CHECK(std::is_sorted(all.begin(), all.end(),
                       [](const EtaHit& a, const EtaHit& b) { return a.n < b.n; }));
  CHECK(search_eta(0.777, 1e-9, 50, 4).empty());
}
