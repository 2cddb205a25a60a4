#include "arw/chaos.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

#include "arw/detail/quadrature.hpp"
#include "arw/errors.hpp"

namespace arw {

namespace {

using BigInt = boost::multiprecision::cpp_int;

BigInt factorial(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

BigInt binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

double big_ratio(const BigInt& num, const BigInt& den) {
  // exact rational -> double via long-double division of scaled parts
  boost::multiprecision::cpp_bin_float_quad n(num), d(den);
  return static_cast<double>(n / d);
}

}  // namespace

double hermite(int q, double t) {
  if (q < 0 || q > 64) fail("order_too_large", "hermite order must lie in [0, 64]");
  if (q == 0) return 1.0;
  double hm = 1.0, h = t;
  for (int k = 1; k < q; ++k) {
    double next = t * h - k * hm;
    hm = h;
    h = next;
  }
  return h;
}

double beta_coeff(int two_l) {
  return hermite(two_l, 0.0) / std::sqrt(2.0 * M_PI);
}

double p_poly(int N, long long num, long long den) {
  if (N < 0 || N > 32) fail("order_too_large", "p_N supported for N <= 32");
  // p_N(x) = sum_j (-1)^j (-1)^N C(N,j) (2j+1)!/(j!)^2 x^j at x = num/den:
  // clear denominators to den^N and evaluate exactly.
  BigInt acc = 0;
  for (int j = 0; j <= N; ++j) {
    BigInt term = binomial(N, j) * factorial(2 * j + 1) / (factorial(j) * factorial(j));
    BigInt p = 1;
    for (int k = 0; k < j; ++k) p *= num;
    for (int k = 0; k < N - j; ++k) p *= den;
    term *= p;
    if (((j + N) % 2) != 0) term = -term;
    acc += term;
  }
  BigInt d = 1;
  for (int k = 0; k < N; ++k) d *= den;
  return big_ratio(acc, d);
}

double alpha_coeff(int two_a, int two_b) {
  if (two_a < 0 || two_b < 0 || (two_a % 2) || (two_b % 2))
    fail("bad_config", "alpha indices must be even and nonnegative");
  const int a = two_a / 2, b = two_b / 2;
  if (a + b > 32) fail("order_too_large", "alpha supported for a + b <= 32");
  BigInt num = factorial(2 * a) * factorial(2 * b);
  BigInt den = factorial(a) * factorial(b);
  BigInt two = 1;
  for (int k = 0; k < a + b; ++k) two *= 2;
  return std::sqrt(M_PI / 2.0) * big_ratio(num, den * two) * p_poly(a + b, 1, 4);
}

std::array<double, 4> w_vector(const WaveCoefficients& coeffs) {
  const LatticeSet& ls = *coeffs.lattice;
  const double M = static_cast<double>(ls.half_points.size());
  detail::CompensatedSum w1, w2, w3, w4;
  for (size_t i = 0; i < coeffs.a.size(); ++i) {
    const auto& p = ls.half_points[i];
    const double e = std::norm(coeffs.a[i]) - 1.0;
    w1.add(e * static_cast<double>(ls.n));
    w2.add(e * static_cast<double>(p.x * p.x));
    w3.add(e * static_cast<double>(p.y * p.y));
    w4.add(e * static_cast<double>(p.x * p.y));
  }
  const double pref = 1.0 / (static_cast<double>(ls.n) * std::sqrt(M));
  return {pref * w1.value(), pref * w2.value(), pref * w3.value(), pref * w4.value()};
}

double r_statistic(const WaveCoefficients& coeffs) {
  detail::CompensatedSum s;
  for (const auto& a : coeffs.a) {
    double a2 = std::norm(a);
    s.add(a2 * a2);
  }
  return s.value() / coeffs.lattice->cardinality;
}

double fourth_chaos_closed_form(const WaveCoefficients& coeffs) {
  const LatticeSet& ls = *coeffs.lattice;
  const auto w = w_vector(coeffs);
  const double r = r_statistic(coeffs);
  const double N = ls.cardinality;
  const double energy = 4.0 * M_PI * M_PI * ls.n;
  const double f = (w[1] + w[2]) * (w[1] + w[2]) - 2.0 * w[1] * w[1] - 2.0 * w[2] * w[2] -
                   4.0 * w[3] * w[3];
  return std::sqrt(energy / (512.0 * N * N)) * (f + r);
}

double m_statistic(const WaveCoefficients& coeffs) {
  const LatticeSet& ls = *coeffs.lattice;
  const auto w = w_vector(coeffs);
  const double N = ls.cardinality;
  const double mu4 = mu_hat4(ls).to_double();
  const double f = (w[1] + w[2]) * (w[1] + w[2]) - 2.0 * w[1] * w[1] - 2.0 * w[2] * w[2] -
                   4.0 * w[3] * w[3];
  return f / std::sqrt(1.0 + mu4 * mu4 + 34.0 / N);
}

double fourth_chaos_variance_exact(const LatticeSet& ls) {
  const double N = ls.cardinality;
  const double mu4 = mu_hat4(ls).to_double();
  const double energy = 4.0 * M_PI * M_PI * ls.n;
  return energy / (512.0 * N * N) * (1.0 + mu4 * mu4 + 34.0 / N);
}

double fourth_chaos_variance_corrected(const LatticeSet& ls) {
  const double N = ls.cardinality;
  const double mu4 = mu_hat4(ls).to_double();
  const double energy = 4.0 * M_PI * M_PI * ls.n;
  return energy / (512.0 * N * N) * (1.0 + mu4 * mu4 - 2.0 / N);
}

namespace detail {

double projection_quadrature_even(const WaveCoefficients& coeffs, int q, int m) {
  if (q < 2 || (q % 2) != 0) fail("order_unsupported", "projection order must be even >= 2");
  const LatticeSet& ls = *coeffs.lattice;
  long long ceil_root = isqrt_floor(ls.n);
  if (ceil_root * ceil_root != ls.n) ++ceil_root;
  if (m < 8 * ceil_root)
    fail("resolution_too_low", "projection quadrature needs m >= 8 ceil(sqrt n)");
  FieldGrid g = evaluate_grid(coeffs, m, m > 2 * ceil_root ? GridMethod::spectral : GridMethod::direct);

  const int qq = q / 2;
  // weights c(u,k) = alpha_{2k,2u-2k} beta_{2q-2u} / ((2k)! (2u-2k)! (2q-2u)!)
  std::vector<std::vector<double>> weight(qq + 1);
  for (int u = 0; u <= qq; ++u) {
    weight[u].resize(u + 1);
    for (int k = 0; k <= u; ++k) {
      double denom = std::tgamma(2 * k + 1) * std::tgamma(2 * (u - k) + 1) *
                     std::tgamma(2 * (qq - u) + 1);
      weight[u][k] = alpha_coeff(2 * k, 2 * (u - k)) * beta_coeff(2 * (qq - u)) / denom;
    }
  }

  CompensatedSum acc;
  const size_t mm = g.values.size();
  for (size_t i = 0; i < mm; ++i) {
    const double t = g.values[i];
    const double d1 = g.grad_x[i];
    const double d2 = g.grad_y[i];
    double cell = 0.0;
    for (int u = 0; u <= qq; ++u)
      for (int k = 0; k <= u; ++k)
        cell += weight[u][k] * hermite(2 * (qq - u), t) * hermite(2 * k, d1) *
                hermite(2 * (u - k), d2);
    acc.add(cell);
  }
  const double energy_half = 4.0 * M_PI * M_PI * ls.n / 2.0;
  return std::sqrt(energy_half) * acc.value() / static_cast<double>(mm);
}

}  // namespace detail

double chaos_projection_quadrature(const WaveCoefficients& coeffs, int q, int m) {
  if (q != 4 && q != 6 && q != 8)
    fail("order_unsupported", "supported projection orders are 4, 6, 8");
  return detail::projection_quadrature_even(coeffs, q, m);
}

ChaosSummary chaos_summary(const WaveCoefficients& coeffs) {
  ChaosSummary s;
  s.w = w_vector(coeffs);
  s.r_stat = r_statistic(coeffs);
  s.fourth_chaos = fourth_chaos_closed_form(coeffs);
  s.m_stat = m_statistic(coeffs);
  s.mu4 = mu_hat4(*coeffs.lattice).to_double();
  return s;
}

}  // namespace arw
