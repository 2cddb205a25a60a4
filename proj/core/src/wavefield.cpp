#include "arw/wavefield.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <mutex>

#include "arw/errors.hpp"

namespace arw {

namespace {

std::mutex fftw_plan_mutex;  // FFTW planning is not thread-safe

// Per-thread c2r workspace, reused across trials. Plans use FFTW_ESTIMATE:
// measured plans can differ between threads and would break the bit-identical
// worker-count contract.
struct FftWorkspace {
  int m{0};
  fftw_complex* in{nullptr};
  double* out{nullptr};
  fftw_plan plan{nullptr};

  void ensure(int new_m) {
    if (m == new_m) return;
    release();
    m = new_m;
    in = fftw_alloc_complex(static_cast<size_t>(m) * (m / 2 + 1));
    out = fftw_alloc_real(static_cast<size_t>(m) * m);
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_c2r_2d(m, m, in, out, FFTW_ESTIMATE);
  }
  void release() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_plan_mutex);
      fftw_destroy_plan(plan);
    }
    if (in) fftw_free(in);
    if (out) fftw_free(out);
    plan = nullptr;
    in = nullptr;
    out = nullptr;
    m = 0;
  }
  ~FftWorkspace() { release(); }
};

FftWorkspace& workspace() {
  thread_local FftWorkspace ws;
  return ws;
}

int wrap_index(long long k, int m) {
  long long r = k % m;
  if (r < 0) r += m;
  return static_cast<int>(r);
}

// Inverse transform of a sparse Hermitian spectrum: out(x) = sum_k F_k e^{2pi i <k,x>}.
// Entries are full-spectrum (index pair, value) including conjugate partners;
// only columns j <= m/2 are stored for the c2r transform.
void sparse_backward_fft(int m, const std::vector<std::pair<std::array<int, 2>, std::complex<double>>>& entries,
                         std::vector<double>& out) {
  FftWorkspace& ws = workspace();
  ws.ensure(m);
  const int cols = m / 2 + 1;
  std::memset(ws.in, 0, sizeof(fftw_complex) * m * cols);
  for (const auto& [idx, v] : entries) {
    if (idx[1] > m / 2) continue;  // implied by its Hermitian partner
    size_t off = static_cast<size_t>(idx[0]) * cols + idx[1];
    ws.in[off][0] += v.real();
    ws.in[off][1] += v.imag();
  }
  fftw_execute(ws.plan);
  out.assign(ws.out, ws.out + static_cast<size_t>(m) * m);
}

}  // namespace

WaveCoefficients sample_coefficients(std::shared_ptr<const LatticeSet> ls, RngStream& rng) {
  WaveCoefficients c;
  c.lattice = std::move(ls);
  c.a.reserve(c.lattice->half_points.size());
  for (size_t i = 0; i < c.lattice->half_points.size(); ++i)
    c.a.push_back(rng.next_complex_gaussian());
  return c;
}

PointSample evaluate(const WaveCoefficients& coeffs, double x, double y) {
  const LatticeSet& ls = *coeffs.lattice;
  const double inv_sqrt_n = 2.0 / std::sqrt(static_cast<double>(ls.cardinality));
  double v = 0.0, dx = 0.0, dy = 0.0;
  for (size_t i = 0; i < coeffs.a.size(); ++i) {
    const auto& p = ls.half_points[i];
    double phase = 2.0 * M_PI * (p.x * x + p.y * y);
    double cph = std::cos(phase), sph = std::sin(phase);
    double br = coeffs.a[i].real(), bi = coeffs.a[i].imag();
    // Re(a e^{i phase}) and Re(a i e^{i phase}) = -(br sin + bi cos)
    v += br * cph - bi * sph;
    double im = br * sph + bi * cph;
    dx += -2.0 * M_PI * p.x * im;
    dy += -2.0 * M_PI * p.y * im;
  }
  PointSample s;
  s.value = inv_sqrt_n * v;
  const double norm = (1.0 / (2.0 * M_PI)) * std::sqrt(2.0 / static_cast<double>(ls.n));
  s.grad_normalized = {inv_sqrt_n * norm * dx, inv_sqrt_n * norm * dy};
  return s;
}

FieldGrid evaluate_grid(const WaveCoefficients& coeffs, int m, GridMethod method) {
  if (m < 8) fail("resolution_too_low", "grid resolution must be at least 8");
  const LatticeSet& ls = *coeffs.lattice;
  const int N = ls.cardinality;
  const size_t mm = static_cast<size_t>(m) * m;
  FieldGrid g;
  g.m = m;
  g.n = ls.n;
  g.values.assign(mm, 0.0);
  g.grad_x.assign(mm, 0.0);
  g.grad_y.assign(mm, 0.0);
  const double amp = 2.0 / std::sqrt(static_cast<double>(N));
  const double norm = (1.0 / (2.0 * M_PI)) * std::sqrt(2.0 / static_cast<double>(ls.n));

  if (method == GridMethod::direct) {
    // Exact periodic phase tables: phase(i,j) = 2 pi (l1 i + l2 j)/m uses
    // only the residue (l1 i + l2 j) mod m.
    std::vector<double> ct(m), st(m);
    for (int k = 0; k < m; ++k) {
      ct[k] = std::cos(2.0 * M_PI * k / m);
      st[k] = std::sin(2.0 * M_PI * k / m);
    }
    for (size_t q = 0; q < coeffs.a.size(); ++q) {
      const auto& p = ls.half_points[q];
      const double br = coeffs.a[q].real(), bi = coeffs.a[q].imag();
      const int r1 = wrap_index(p.x, m), r2 = wrap_index(p.y, m);
      int rowbase = 0;
      for (int i = 0; i < m; ++i) {
        int idx = rowbase;
        double* vrow = g.values.data() + static_cast<size_t>(i) * m;
        double* gxrow = g.grad_x.data() + static_cast<size_t>(i) * m;
        double* gyrow = g.grad_y.data() + static_cast<size_t>(i) * m;
        for (int j = 0; j < m; ++j) {
          double cph = ct[idx], sph = st[idx];
          vrow[j] += br * cph - bi * sph;
          double im = br * sph + bi * cph;
          gxrow[j] += -p.x * im;
          gyrow[j] += -p.y * im;
          idx += r2;
          if (idx >= m) idx -= m;
        }
        rowbase += r1;
        if (rowbase >= m) rowbase -= m;
      }
    }
    for (size_t i = 0; i < mm; ++i) {
      g.values[i] *= amp;
      g.grad_x[i] *= amp * 2.0 * M_PI * norm;
      g.grad_y[i] *= amp * 2.0 * M_PI * norm;
    }
    return g;
  }

  // spectral: requires every frequency below the grid Nyquist
  long long root = isqrt_floor(ls.n);
  long long ceil_root = (root * root == ls.n) ? root : root + 1;
  if (m <= 2 * ceil_root)
    fail("resolution_too_low", "spectral synthesis needs m > 2 ceil(sqrt n)");

  std::vector<std::pair<std::array<int, 2>, std::complex<double>>> ent_v, ent_x, ent_y;
  ent_v.reserve(2 * coeffs.a.size());
  ent_x.reserve(2 * coeffs.a.size());
  ent_y.reserve(2 * coeffs.a.size());
  for (size_t q = 0; q < coeffs.a.size(); ++q) {
    const auto& p = ls.half_points[q];
    std::complex<double> a = coeffs.a[q];
    std::array<int, 2> ip = {wrap_index(p.x, m), wrap_index(p.y, m)};
    std::array<int, 2> in_ = {wrap_index(-p.x, m), wrap_index(-p.y, m)};
    // field: (1/sqrt N) a at +l and conj at -l gives 2 Re(...) / sqrt N
    std::complex<double> va = a / std::sqrt(static_cast<double>(N));
    ent_v.push_back({ip, va});
    ent_v.push_back({in_, std::conj(va)});
    std::complex<double> iva(0.0, 1.0);
    std::complex<double> gx = iva * (2.0 * M_PI * p.x) * va * norm;
    std::complex<double> gy = iva * (2.0 * M_PI * p.y) * va * norm;
    ent_x.push_back({ip, gx});
    ent_x.push_back({in_, std::conj(gx)});
    ent_y.push_back({ip, gy});
    ent_y.push_back({in_, std::conj(gy)});
  }
  sparse_backward_fft(m, ent_v, g.values);
  sparse_backward_fft(m, ent_x, g.grad_x);
  sparse_backward_fft(m, ent_y, g.grad_y);
  return g;
}

FieldGrid evaluate_grid(std::shared_ptr<const WaveCoefficients> coeffs, int m, GridMethod method) {
  FieldGrid g = evaluate_grid(*coeffs, m, method);
  g.source = std::move(coeffs);
  return g;
}

double covariance(const LatticeSet& ls, double x, double y) {
  double s = 0.0;
  for (const auto& p : ls.points) s += std::cos(2.0 * M_PI * (x * p.x + y * p.y));
  return s / ls.cardinality;
}

Rational gradient_variance_check(const LatticeSet& ls) {
  __int128 s1 = 0, s2 = 0;
  for (const auto& p : ls.points) {
    s1 += static_cast<__int128>(p.x) * p.x;
    s2 += static_cast<__int128>(p.y) * p.y;
  }
  __int128 expect = static_cast<__int128>(ls.n) * ls.cardinality;
  if (2 * s1 != expect || 2 * s2 != expect)
    fail("identity_violation", "sum l_j^2 != n N / 2");
  return Rational::of(ls.n, 2);
}

void write_grid(const FieldGrid& grid, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail("io_error", "cannot open " + path);
  const std::uint32_t magic = 0x47575241u;  // "ARWG"
  const std::uint32_t m = static_cast<std::uint32_t>(grid.m);
  const std::uint64_t n = static_cast<std::uint64_t>(grid.n);
  std::fwrite(&magic, sizeof magic, 1, f);
  std::fwrite(&m, sizeof m, 1, f);
  std::fwrite(&n, sizeof n, 1, f);
  std::fwrite(grid.values.data(), sizeof(double), grid.values.size(), f);
  std::fclose(f);
}

}  // namespace arw
