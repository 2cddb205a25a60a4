#include "arw/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "arw/detail/quadrature.hpp"
#include "arw/errors.hpp"

namespace arw {

namespace {

struct Segment {
  // absolute torus coordinates of the endpoints; dx spans at most one cell
  double x1, y1, x2, y2;
};

// Marching squares over the periodic grid. Cell (i,j) has corners
// A=(i,j), B=(i+1,j), C=(i,j+1), D=(i+1,j+1); emits 0, 1 or 2 segments per
// cell through `sink`. Exact zeros were already perturbed by the caller.
template <typename Sink>
long long march(const FieldGrid& grid, const std::vector<double>& v, Sink&& sink) {
  const int m = grid.m;
  const double h = 1.0 / m;
  const bool have_source = static_cast<bool>(grid.source);
  long long segments = 0;

  auto val = [&](int i, int j) -> double {
    return v[static_cast<size_t>(i) * m + j];
  };

  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1 == m) ? 0 : i + 1;
    for (int j = 0; j < m; ++j) {
      const int jp = (j + 1 == m) ? 0 : j + 1;
      const double A = val(i, j), B = val(ip, j), C = val(i, jp), D = val(ip, jp);
      const int cfg = (A > 0) | ((B > 0) << 1) | ((C > 0) << 2) | ((D > 0) << 3);
      if (cfg == 0 || cfg == 15) continue;

      const double x0 = i * h, y0 = j * h;
      // crossing offsets along the four edges (valid only when used)
      const double tAB = A / (A - B);  // point (x0 + tAB h, y0)
      const double tAC = A / (A - C);  // point (x0, y0 + tAC h)
      const double tBD = B / (B - D);  // point (x0 + h, y0 + tBD h)
      const double tCD = C / (C - D);  // point (x0 + tCD h, y0 + h)

      auto emit = [&](double ax, double ay, double bx, double by) {
        sink(Segment{x0 + ax * h, y0 + ay * h, x0 + bx * h, y0 + by * h});
        ++segments;
      };

      switch (cfg) {
        case 1: case 14: emit(tAB, 0.0, 0.0, tAC); break;
        case 2: case 13: emit(tAB, 0.0, 1.0, tBD); break;
        case 4: case 11: emit(0.0, tAC, tCD, 1.0); break;
        case 8: case 7:  emit(1.0, tBD, tCD, 1.0); break;
        case 3: case 12: emit(0.0, tAC, 1.0, tBD); break;
        case 5: case 10: emit(tAB, 0.0, tCD, 1.0); break;
        case 9: case 6: {
          // saddle: separate by the cell-centre sign, exact when possible
          double centre;
          if (have_source)
            centre = evaluate(*grid.source, x0 + 0.5 * h, y0 + 0.5 * h).value;
          else
            centre = 0.25 * (A + B + C + D);
          const bool centre_pos = centre > 0;
          const bool a_pos = (cfg == 9);  // A,D positive; else B,C positive
          if (a_pos == centre_pos) {
            // nodal curves cut off the two negative (resp. positive) corners B and C
            emit(tAB, 0.0, 1.0, tBD);
            emit(0.0, tAC, tCD, 1.0);
          } else {
            emit(tAB, 0.0, 0.0, tAC);
            emit(1.0, tBD, tCD, 1.0);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segments;
}

// copy of the grid values with exact zeros nudged off the level; the 1%
// degeneracy guard is waived for callers that opt into perturbation
std::vector<double> prepare_values(const FieldGrid& grid, bool force_perturb) {
  const size_t mm = grid.values.size();
  double scale = 0.0;
  size_t zeros = 0;
  for (double v : grid.values) {
    scale = std::max(scale, std::abs(v));
    if (v == 0.0) ++zeros;
  }
  if (!force_perturb && zeros > mm / 100)
    fail("degenerate_field", "more than 1% of grid nodes are exactly zero");
  if (scale == 0.0)
    fail("degenerate_field", "field is identically zero on the grid");
  std::vector<double> v = grid.values;
  if (zeros > 0) {
    const double nudge = 1e-12 * scale;
    for (double& x : v)
      if (x == 0.0) x = nudge;
  }
  return v;
}

double length_of(const Segment& s) {
  return std::hypot(s.x2 - s.x1, s.y2 - s.y1);
}

// Overlap length of a segment with the disc of radius r centred at (cx, cy);
// the segment is short (one grid cell), so plain euclidean geometry applies
// in the recentred chart.
double clipped_length(const Segment& s, double cx, double cy, double r) {
  const double dx = s.x2 - s.x1, dy = s.y2 - s.y1;
  const double fx = s.x1 - cx, fy = s.y1 - cy;
  const double a = dx * dx + dy * dy;
  if (a == 0.0) return 0.0;
  const double b = 2.0 * (fx * dx + fy * dy);
  const double c = fx * fx + fy * fy - r * r;
  const double disc = b * b - 4.0 * a * c;
  if (disc <= 0.0) {
    return c <= 0.0 ? std::sqrt(a) : 0.0;  // fully inside or fully outside
  }
  const double sq = std::sqrt(disc);
  double t1 = (-b - sq) / (2.0 * a);
  double t2 = (-b + sq) / (2.0 * a);
  t1 = std::max(t1, 0.0);
  t2 = std::min(t2, 1.0);
  if (t2 <= t1) return c <= 0.0 ? std::sqrt(a) : 0.0;
  return (t2 - t1) * std::sqrt(a);
}

}  // namespace

int default_grid_m(long long n) {
  long long r = isqrt_floor(n);
  if (r * r != n) ++r;
  long long m = std::max<long long>(256, 8 * r);
  // round up to a multiple of 32 (keeps FFT sizes friendly)
  m = ((m + 31) / 32) * 32;
  return static_cast<int>(m);
}

namespace {

NodalMeasurement total_length(const FieldGrid& grid, bool force_perturb) {
  std::vector<double> v = prepare_values(grid, force_perturb);
  detail::CompensatedSum acc;
  long long segs = march(grid, v, [&](const Segment& s) { acc.add(length_of(s)); });
  NodalMeasurement out;
  out.length = acc.value();
  out.m = grid.m;
  out.segments = segs;
  return out;
}

}  // namespace

NodalMeasurement nodal_length(const FieldGrid& grid) {
  return total_length(grid, false);
}

NodalMeasurement nodal_length_restricted(const FieldGrid& grid, double cx, double cy, double s) {
  if (!(s > 0.0 && s < 0.5)) fail("radius_out_of_range", "radius must lie in (0, 1/2)");
  std::vector<double> v = prepare_values(grid, false);
  // Recentre so the ball sits at (1/2, 1/2), away from the chart seam;
  // stationarity makes the centre immaterial for the statistics.
  const double sx = 0.5 - cx, sy = 0.5 - cy;
  detail::CompensatedSum acc;
  long long segs = 0;
  march(grid, v, [&](const Segment& seg) {
    double x1 = seg.x1 + sx, y1 = seg.y1 + sy;
    double x1w = x1 - std::floor(x1), y1w = y1 - std::floor(y1);
    Segment t{x1w, y1w, x1w + (seg.x2 - seg.x1), y1w + (seg.y2 - seg.y1)};
    double c = clipped_length(t, 0.5, 0.5, s);
    if (c > 0.0) {
      acc.add(c);
      ++segs;
    }
  });
  NodalMeasurement out;
  out.length = acc.value();
  out.m = grid.m;
  out.segments = segs;
  return out;
}

double nodal_length_smoothed(const WaveCoefficients& coeffs, double eps, int m) {
  if (eps <= 0.0) fail("bad_config", "eps must be positive");
  const LatticeSet& ls = *coeffs.lattice;
  long long ceil_root = isqrt_floor(ls.n);
  if (ceil_root * ceil_root != ls.n) ++ceil_root;
  if (m < 8 * ceil_root)
    fail("resolution_too_low", "smoothed estimator needs m >= 8 ceil(sqrt n)");
  FieldGrid g = evaluate_grid(coeffs, m, m > 2 * (isqrt_floor(ls.n) + 1)
                                              ? GridMethod::spectral
                                              : GridMethod::direct);
  // un-normalized gradient: grad = normalized * 2 pi sqrt(n/2)
  const double denorm = 2.0 * M_PI * std::sqrt(static_cast<double>(ls.n) / 2.0);
  detail::CompensatedSum acc;
  const size_t mm = g.values.size();
  for (size_t i = 0; i < mm; ++i) {
    if (std::abs(g.values[i]) <= eps) {
      double gn = std::hypot(g.grad_x[i], g.grad_y[i]) * denorm;
      acc.add(gn);
    }
  }
  return acc.value() / (2.0 * eps * static_cast<double>(mm));
}

NodalMeasurement refine_until(std::shared_ptr<const WaveCoefficients> coeffs, double rel_tol, int m0) {
  if (!(rel_tol > 1e-6 && rel_tol < 1e-1)) fail("bad_config", "rel_tol must lie in (1e-6, 1e-1)");
  const int recommended = default_grid_m(coeffs->lattice->n);
  NodalMeasurement out;
  out.started_below_recommended = m0 < recommended;
  int m = m0;
  double prev = -1.0;
  while (true) {
    if (m > (1 << 14)) fail("max_resolution_exceeded", "refinement exceeded m = 2^14");
    long long nyq = 2 * (isqrt_floor(coeffs->lattice->n) + 1);
    FieldGrid g = evaluate_grid(coeffs, m, m > nyq ? GridMethod::spectral : GridMethod::direct);
    // drivers may perturb non-generic inputs (analytic fields can zero out
    // whole grid columns exactly)
    NodalMeasurement cur = total_length(g, true);
    out.refinement_history.emplace_back(m, cur.length);
    out.length = cur.length;
    out.m = m;
    out.segments = cur.segments;
    if (prev >= 0.0 && std::abs(cur.length - prev) < rel_tol * std::abs(cur.length)) break;
    prev = cur.length;
    m *= 2;
  }
  return out;
}

}  // namespace arw
