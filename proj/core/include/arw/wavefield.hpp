#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "arw/lattice.hpp"
#include "arw/rng.hpp"

namespace arw {

// One realization of the coefficient family {a_l}, indexed by half_points.
// The implied full family has a_{-l} = conj(a_l); only the half set is stored.
struct WaveCoefficients {
  std::shared_ptr<const LatticeSet> lattice;
  std::vector<std::complex<double>> a;
};

WaveCoefficients sample_coefficients(std::shared_ptr<const LatticeSet> ls, RngStream& rng);

struct PointSample {
  double value{0.0};
  std::array<double, 2> grad_normalized{0.0, 0.0};
};

// T_n(x) = (2/sqrt N) sum_{half} Re(a_l e^{2 pi i <l,x>}); the gradient is
// scaled by (1/2pi) sqrt(2/n) so each component has unit variance.
PointSample evaluate(const WaveCoefficients& coeffs, double x, double y);

enum class GridMethod { direct, spectral };

// Samples on the periodic m x m grid, x_ij = (i/m, j/m), row-major i*m+j.
struct FieldGrid {
  int m{0};
  long long n{0};
  std::vector<double> values;
  std::vector<double> grad_x;  // normalized derivatives
  std::vector<double> grad_y;
  std::shared_ptr<const WaveCoefficients> source;  // for exact cell-centre signs

  double value(int i, int j) const {
    int ii = i % m; if (ii < 0) ii += m;
    int jj = j % m; if (jj < 0) jj += m;
    return values[static_cast<size_t>(ii) * m + jj];
  }
};

// method=spectral places the coefficients on the frequency grid and inverse
// FFTs; it requires m > 2*ceil(sqrt n) ("resolution_too_low" otherwise).
FieldGrid evaluate_grid(const WaveCoefficients& coeffs, int m, GridMethod method);
FieldGrid evaluate_grid(std::shared_ptr<const WaveCoefficients> coeffs, int m, GridMethod method);

// r_n(x) = (1/N) sum_Lambda cos(2 pi <x, l>)
double covariance(const LatticeSet& ls, double x, double y);

// Checks the exact identity sum l1^2 = n N / 2 and returns Var(d_j T)/(4 pi^2)
// = n/2 as an exact rational.
Rational gradient_variance_check(const LatticeSet& ls);

// Binary dump: 16-byte header {u32 magic 'ARWG', u32 m, u64 n} + row-major
// f64 values.
void write_grid(const FieldGrid& grid, const std::string& path);

}  // namespace arw
