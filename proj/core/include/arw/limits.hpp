#pragma once

#include <Eigen/Dense>

#include "arw/lattice.hpp"
#include "arw/rng.hpp"

namespace arw {

// Limit covariance of (W2, W3, W4); singular exactly at eta = +-1.
Eigen::Matrix3d sigma_matrix(double eta);

// Limit covariance of the full W vector; always singular (W2 + W3 = W1),
// eigenvalues {0, 3/2, (1-eta)/8, (1+eta)/4}.
Eigen::Matrix4d gamma_matrix(double eta);

struct EtaParams {
  double eta{0.0};
  Eigen::Matrix3d sigma;
  Eigen::Matrix4d gamma;
};
EtaParams eta_params(double eta);

// One draw of (2 - (1+eta) X1^2 - (1-eta) X2^2) / (2 sqrt(1+eta^2)).
double sample_M_eta(double eta, RngStream& rng);

// P(M_eta <= -t) for t > 0, by adaptive quadrature of the chi-square(1)
// conditioning integral with erfc inner tails; relative error < 1e-12.
double tail_probability_M_eta(double eta, double t);
double log_tail_probability_M_eta(double eta, double t);

// psi(theta) = (1/2) <theta, Sigma_eta theta>
double psi(const Eigen::Vector3d& theta, double eta);

// Legendre transform of psi. For |eta| < 1 this is (1/2) <x, Sigma^{-1} x>;
// at eta = +-1 it is +infinity off the image of Sigma (image test at 1e-10)
// and the restricted-inverse quadratic form on it.
double psi_star(const Eigen::Vector3d& x, double eta);

// I_eta(y) = -y sqrt(1+eta^2)/(1+|eta|) for y <= 0, +infinity for y > 0.
double rate_function(double y, double eta);

// Numeric constrained minimization of psi_star over {f(x) = y} with
// f(x) = -(x1-x2)^2 - 4 x3^2, parametrized on the constraint ellipse with the
// free sum coordinate minimized by golden-section search. Independent oracle
// for the contraction-principle value I_f(y) = -y/(1+|eta|); requires y < 0.
double rate_function_bruteforce(double y, double eta, double grid_radius, int resolution);

struct CgfResult {
  double value{0.0};
  double speed_ratio{0.0};  // alpha / log N, the scaling-condition report
};

// (1/alpha) sum_{half} (-t - log(1-t)), t = <theta, b(l)> sqrt(alpha/(N/2)),
// using E[exp(t(|a|^2-1))] = e^{-t}/(1-t). Throws "mgf_divergent" when any
// t >= 1.
CgfResult cgf_Sn(const Eigen::Vector3d& theta, const LatticeSet& ls, double alpha);

}  // namespace arw
