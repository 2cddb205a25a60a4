#pragma once

#include <array>

#include "arw/wavefield.hpp"

namespace arw {

// Probabilists' Hermite polynomial by the three-term recurrence
// H_{q+1}(t) = t H_q(t) - q H_{q-1}(t). Throws "order_too_large" for q > 64.
double hermite(int q, double t);

// beta_{2l} = H_{2l}(0) / sqrt(2 pi)
double beta_coeff(int two_l);

// alpha_{2a,2b} = sqrt(pi/2) (2a)!(2b)!/(a! b!) 2^{-(a+b)} p_{a+b}(1/4),
// with p_N evaluated from exact integer arithmetic. Requires a + b <= 32.
double alpha_coeff(int two_a, int two_b);

// p_N(x) at x = num/den, exact until the final division.
double p_poly(int N, long long num, long long den);

// W(n) = (1/(n sqrt(N/2))) sum_{half} (|a|^2 - 1) (n, l1^2, l2^2, l1 l2)
std::array<double, 4> w_vector(const WaveCoefficients& coeffs);

// R(n) = (1/N) sum_{half} |a|^4, E[R] = 1
double r_statistic(const WaveCoefficients& coeffs);

// sqrt(E/(512 N^2)) ((W2+W3)^2 - 2 W2^2 - 2 W3^2 - 4 W4^2 + R)
double fourth_chaos_closed_form(const WaveCoefficients& coeffs);

// (1 + mu4^2 + 34/N)^{-1/2} ((W2+W3)^2 - 2 W2^2 - 2 W3^2 - 4 W4^2)
double m_statistic(const WaveCoefficients& coeffs);

// E/(512 N^2) (1 + mu4^2 + 34/N), the reference exact-variance display.
double fourth_chaos_variance_exact(const LatticeSet& ls);

// E/(512 N^2) (1 + mu4^2 - 2/N): the variance of the closed form as sampled,
// and as derived from the exact moment identities of |a|^2 ~ Exp(1). The
// experiments report comparisons against both displays.
double fourth_chaos_variance_corrected(const LatticeSet& ls);

// Grid quadrature of the order-2q projection integrand (triple Hermite sum
// with the alpha/beta weights and prefactor sqrt(4 pi^2 n / 2)). Public
// surface accepts q in {4, 6, 8} ("order_unsupported" otherwise).
double chaos_projection_quadrature(const WaveCoefficients& coeffs, int q, int m);

namespace detail {
// Same assembly for any even order >= 2; q = 2 is the Berry-cancellation
// check and returns 0 up to roundoff.
double projection_quadrature_even(const WaveCoefficients& coeffs, int q, int m);
}  // namespace detail

struct ChaosSummary {
  std::array<double, 4> w{};
  double r_stat{0.0};
  double fourth_chaos{0.0};
  double m_stat{0.0};
  double mu4{0.0};
};

ChaosSummary chaos_summary(const WaveCoefficients& coeffs);

}  // namespace arw
