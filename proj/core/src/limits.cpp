#include "arw/limits.hpp"

#include <cmath>
#include <limits>

#include "arw/detail/quadrature.hpp"
#include "arw/errors.hpp"

namespace arw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// golden-section minimum of a unimodal (here convex) scalar function
template <typename F>
double golden_min(F&& f, double lo, double hi, double tol, double* argmin = nullptr) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    }
  }
  double xm = 0.5 * (a + b);
  if (argmin) *argmin = xm;
  return f(xm);
}

}  // namespace

Eigen::Matrix3d sigma_matrix(double eta) {
  Eigen::Matrix3d s;
  const double p = (3.0 + eta) / 8.0, q = (1.0 - eta) / 8.0;
  s << p, q, 0.0,
       q, p, 0.0,
       0.0, 0.0, q;
  return s;
}

Eigen::Matrix4d gamma_matrix(double eta) {
  Eigen::Matrix4d g;
  const double p = (3.0 + eta) / 8.0, q = (1.0 - eta) / 8.0;
  g << 1.0, 0.5, 0.5, 0.0,
       0.5, p,   q,   0.0,
       0.5, q,   p,   0.0,
       0.0, 0.0, 0.0, q;
  return g;
}

EtaParams eta_params(double eta) {
  return {eta, sigma_matrix(eta), gamma_matrix(eta)};
}

double sample_M_eta(double eta, RngStream& rng) {
  if (std::abs(eta) > 1.0) fail("bad_config", "|eta| must be <= 1");
  const double x1 = rng.next_normal();
  const double x2 = rng.next_normal();
  return (2.0 - (1.0 + eta) * x1 * x1 - (1.0 - eta) * x2 * x2) /
         (2.0 * std::sqrt(1.0 + eta * eta));
}

double log_tail_probability_M_eta(double eta, double t) {
  if (std::abs(eta) > 1.0) fail("bad_config", "|eta| must be <= 1");
  if (t <= 0.0) fail("bad_config", "t must be positive");
  // P(M_eta <= -t) = P(a X1^2 + b X2^2 >= u), a = 1+|eta| >= b = 1-|eta|
  // (M_eta and M_{-eta} share their law), u = 2 sqrt(1+eta^2) t + 2.
  const double a = 1.0 + std::abs(eta);
  const double b = 1.0 - std::abs(eta);
  const double u = 2.0 * std::sqrt(1.0 + eta * eta) * t + 2.0;

  // Condition on X1. With x = sqrt(u/a) sin(psi) the remainder is
  //   P = erfc(sqrt(u/(2a))) + int_0^{pi/2} 2 phi(x) erfc(cos(psi) sqrt(u/(2b))) x'(psi) dpsi,
  // all terms sharing the e^{-u/(2a)} scale, so the quadrature is relatively
  // accurate far into the tail.
  const double boundary = std::erfc(std::sqrt(u / (2.0 * a)));
  if (b == 0.0) return std::log(boundary);
  const double root_ua = std::sqrt(u / a);
  const double inner = std::sqrt(u / (2.0 * b));
  auto integrand = [&](double psi) {
    const double x = root_ua * std::sin(psi);
    const double dphi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    return 2.0 * dphi * std::erfc(std::cos(psi) * inner) * root_ua * std::cos(psi);
  };
  const double integral = detail::adaptive_quadrature(integrand, 0.0, 0.5 * M_PI, 1e-14, 600);
  return std::log(boundary + integral);
}

double tail_probability_M_eta(double eta, double t) {
  return std::exp(log_tail_probability_M_eta(eta, t));
}

double psi(const Eigen::Vector3d& theta, double eta) {
  return 0.5 * theta.dot(sigma_matrix(eta) * theta);
}

double psi_star(const Eigen::Vector3d& x, double eta) {
  if (std::abs(eta) > 1.0) fail("bad_config", "|eta| must be <= 1");
  if (std::abs(eta) < 1.0) {
    // closed-form inverse of the 2x2 symmetric block plus the third axis
    const double p = (3.0 + eta) / 8.0, q = (1.0 - eta) / 8.0;
    const double det = p * p - q * q;  // (1+eta)/8 * 1/2 > 0
    Eigen::Matrix3d inv;
    inv << p / det, -q / det, 0.0,
           -q / det, p / det, 0.0,
           0.0, 0.0, 1.0 / q;
    return 0.5 * x.dot(inv * x);
  }
  const double tol = 1e-10;
  if (eta > 0.0) {
    // Sigma(1) = diag(1/2, 1/2, 0): image is {x3 = 0}
    if (std::abs(x[2]) > tol) return kInf;
    return x[0] * x[0] + x[1] * x[1];
  }
  // Sigma(-1): image is {x1 = x2}; restricted inverse gives 2 x1^2 + 2 x3^2
  if (std::abs(x[0] - x[1]) / std::sqrt(2.0) > tol) return kInf;
  const double x1 = 0.5 * (x[0] + x[1]);
  return 2.0 * x1 * x1 + 2.0 * x[2] * x[2];
}

double rate_function(double y, double eta) {
  if (y > 0.0) return kInf;
  return -y * std::sqrt(1.0 + eta * eta) / (1.0 + std::abs(eta));
}

double rate_function_bruteforce(double y, double eta, double grid_radius, int resolution) {
  if (!(y < 0.0)) fail("bad_config", "oracle requires y < 0");
  if (resolution < 200) fail("bad_config", "resolution must be >= 200");
  // Constraint set for f(x) = -(x1-x2)^2 - 4 x3^2 = y: with d = x1 - x2,
  // d^2 + 4 x3^2 = -y is an ellipse; parametrize d = sqrt(-y) cos(g),
  // x3 = sqrt(-y)/2 sin(g) and minimize over the free sum coordinate
  // s = x1 + x2 numerically for each g.
  const double scale = std::sqrt(-y);
  const double s_range = grid_radius > 0.0 ? grid_radius : 4.0 * scale + 1.0;

  auto value_at = [&](double g) {
    const double d = scale * std::cos(g);
    const double x3 = 0.5 * scale * std::sin(g);
    auto along_s = [&](double s) {
      Eigen::Vector3d x(0.5 * (s + d), 0.5 * (s - d), x3);
      return psi_star(x, eta);
    };
    return golden_min(along_s, -s_range, s_range, 1e-11);
  };

  double best = kInf, best_g = 0.0;
  for (int k = 0; k <= resolution; ++k) {
    const double g = 0.5 * M_PI * k / resolution;
    const double v = value_at(g);
    if (v < best) {
      best = v;
      best_g = g;
    }
  }
  if (!std::isfinite(best)) fail("convergence_failure", "no finite candidate on the constraint set");
  const double half_step = 0.5 * M_PI / resolution;
  const double lo = std::max(0.0, best_g - half_step);
  const double hi = std::min(0.5 * M_PI, best_g + half_step);
  double refined = golden_min(value_at, lo, hi, 1e-10);
  return std::min(best, refined);
}

CgfResult cgf_Sn(const Eigen::Vector3d& theta, const LatticeSet& ls, double alpha) {
  if (alpha <= 0.0) fail("bad_config", "alpha must be positive");
  const double M = static_cast<double>(ls.half_points.size());
  const double scaling = std::sqrt(alpha / M);
  detail::CompensatedSum acc;
  for (const auto& p : ls.half_points) {
    const double b1 = static_cast<double>(p.x * p.x) / ls.n;
    const double b2 = static_cast<double>(p.y * p.y) / ls.n;
    const double b3 = static_cast<double>(p.x * p.y) / ls.n;
    const double t = (theta[0] * b1 + theta[1] * b2 + theta[2] * b3) * scaling;
    if (t >= 1.0)
      fail("mgf_divergent", "theta outside the effective domain at this scaling");
    acc.add(-t - std::log1p(-t));
  }
  CgfResult r;
  r.value = acc.value() / alpha;
  r.speed_ratio = alpha / std::log(static_cast<double>(ls.cardinality));
  return r;
}

}  // namespace arw
