#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace arw::detail {

// Neumaier compensated accumulator; reductions that must be order-insensitive
// at accumulation precision go through this.
struct CompensatedSum {
  double sum{0.0};
  double comp{0.0};
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Gauss(7)/Kronrod(15) pair on [a, b] with embedded error estimate.
template <typename F>
double gauss_kronrod_15(F&& f, double a, double b, double& err) {
  static const double kron_x[15] = {
      -0.9914553711208126, -0.9491079123427585, -0.8648644233597691, -0.7415311855993945,
      -0.5860872354676911, -0.4058451513773972, -0.2077849550078985, 0.0,
      0.2077849550078985, 0.4058451513773972, 0.5860872354676911, 0.7415311855993945,
      0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
  static const double kron_w[15] = {
      0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
      0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278,
      0.2044329400752989, 0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
      0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
  static const double gauss_w[7] = {
      0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694,
      0.3818300505051189, 0.2797053914892767, 0.1294849661688697};
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 15; ++i) fv[i] = f(c + h * kron_x[i]);
  double resk = 0.0, resg = 0.0;
  for (int i = 0; i < 15; ++i) resk += kron_w[i] * fv[i];
  for (int i = 0; i < 7; ++i) resg += gauss_w[i] * fv[2 * i + 1];
  err = std::abs(resk - resg) * h;
  return resk * h;
}

// Adaptive refinement: split the worst segment until the summed error
// estimate is below rel_tol times the integral scale.
template <typename F>
double adaptive_quadrature(F&& f, double a, double b, double rel_tol, int max_segments = 400) {
  struct Seg { double a, b, val, err; };
  std::vector<Seg> segs;
  segs.reserve(64);
  double e0;
  double v0 = gauss_kronrod_15(f, a, b, e0);
  segs.push_back({a, b, v0, e0});
  while (static_cast<int>(segs.size()) < max_segments) {
    double total = 0.0, err = 0.0;
    for (const Seg& s : segs) { total += s.val; err += s.err; }
    if (err <= rel_tol * (std::abs(total) + 1e-300)) break;
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Seg& u, const Seg& v) { return u.err < v.err; });
    Seg s = *worst;
    segs.erase(worst);
    double mid = 0.5 * (s.a + s.b);
    double e1, e2;
    double v1 = gauss_kronrod_15(f, s.a, mid, e1);
    double v2 = gauss_kronrod_15(f, mid, s.b, e2);
    segs.push_back({s.a, mid, v1, e1});
    segs.push_back({mid, s.b, v2, e2});
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& u, const Seg& v) { return u.a < v.a; });
  CompensatedSum acc;
  for (const Seg& s : segs) acc.add(s.val);
  return acc.value();
}

}  // namespace arw::detail
