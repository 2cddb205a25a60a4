#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "arw/wavefield.hpp"

namespace arw {

struct NodalMeasurement {
  double length{0.0};
  int m{0};
  long long segments{0};
  std::vector<std::pair<int, double>> refinement_history;  // (m, length)
  bool started_below_recommended{false};
};

// Total nodal length by marching squares with linear interpolation on the
// periodic grid. Saddle cells are resolved by the sign of the cell-centre
// value, evaluated exactly from the coefficients when grid.source is set.
// Throws "degenerate_field" if more than 1% of nodes are exactly zero;
// isolated exact zeros are perturbed by +1e-12 of the field scale.
NodalMeasurement nodal_length(const FieldGrid& grid);

// Length clipped to the euclidean ball B((cx,cy), s) on the torus, by exact
// segment-circle intersection in a chart recentred on the ball.
NodalMeasurement nodal_length_restricted(const FieldGrid& grid, double cx, double cy, double s);

// Quadrature of (2 eps)^-1 1{|T| <= eps} |grad T| over the m x m grid.
double nodal_length_smoothed(const WaveCoefficients& coeffs, double eps, int m);

// Doubles m from m0 until successive lengths differ by less than rel_tol;
// throws "max_resolution_exceeded" beyond m = 2^14.
NodalMeasurement refine_until(std::shared_ptr<const WaveCoefficients> coeffs, double rel_tol, int m0);

// Recommended resolution: at least ~8 samples per wavelength.
int default_grid_m(long long n);

}  // namespace arw
