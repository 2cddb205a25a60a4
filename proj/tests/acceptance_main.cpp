// Acceptance suite: one check per numbered criterion, one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "arw/chaos.hpp"
#include "arw/experiments.hpp"
#include "arw/lattice.hpp"
#include "arw/limits.hpp"
#include "arw/nodal.hpp"
#include "arw/rng.hpp"
#include "arw/wavefield.hpp"

using namespace arw;

namespace {

constexpr std::uint64_t kSeed = 20260810ULL;

int hw_workers() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 2 : static_cast<int>(h);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

int failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
  std::printf("C%-2d %s %s: %s\n", idx, pass ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

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

// Deterministic level selection for the "found via search_eta" criteria:
// the smallest n of the requested multiplicity, except at N = 64 where the
// thresholds apply and the representative closest to eta = 0 is taken.
long long pick_n(int multiplicity, long long n_max = 33000) {
  auto hits = search_eta(0.0, 1.0, n_max, multiplicity);
  long long best = -1;
  double best_mu = 2.0;
  for (const auto& h : hits) {
    if (h.multiplicity != multiplicity) continue;
    if (multiplicity < 64) return h.n;  // hits are sorted by n
    double m = std::abs(h.mu4.to_double());
    if (m < best_mu - 1e-15) {
      best_mu = m;
      best = h.n;
    }
  }
  return best;
}

std::vector<double> closed_form_samples(long long n, long long trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::variance;
  cfg.n = n;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.workers = hw_workers();
  RawTable raw;
  run_experiment(cfg, &raw);
  std::vector<double> out(trials);
  for (long long t = 0; t < trials; ++t) out[t] = raw.rows[t][1];
  return out;
}

// ---- criteria -------------------------------------------------------------

void criterion1() {
  Timer timer;
  long long checked = 0;
  bool ok = true;
  std::string why;
  for (long long n = 1; n <= 10000 && ok; ++n) {
    if (!representable(n)) continue;
    LatticeSet ls = decompose(n);
    LatticeMoments mo = moments(ls);
    const long long N = ls.cardinality;
    const __int128 scale = static_cast<__int128>(n) * n * N;
    if (2 * mo.sum_l1_sq != n * N) { ok = false; why = "sum l1^2"; }
    if (mo.sum_l1cub_l2 != 0 || mo.sum_l1_l2cub != 0) { ok = false; why = "odd moments"; }
    if (static_cast<__int128>(mo.sum_l1_4) * 8 * mo.mu4.den !=
        scale * (3 * mo.mu4.den + mo.mu4.num)) { ok = false; why = "sum l1^4"; }
    if (static_cast<__int128>(mo.sum_l1sq_l2sq) * 8 * mo.mu4.den !=
        scale * (mo.mu4.den - mo.mu4.num)) { ok = false; why = "sum l1^2 l2^2"; }
    if (std::abs(mo.mu4.to_double()) > 1.0) { ok = false; why = "mu4 range"; }
    if (ls.cardinality != r2_oracle(n)) { ok = false; why = "r2 oracle"; }
    ++checked;
  }
  double el = timer.seconds();
  if (el >= 30.0) { ok = false; why = "runtime"; }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%lld representable n <= 10^4, all moment identities exact, N matches the divisor oracle (%.1f s)%s%s",
                checked, el, ok ? "" : " -- first failure: ", ok ? "" : why.c_str());
  report(1, "exact-arithmetic", ok, buf);
}

void criterion2() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (long long n : {1LL, 5LL, 25LL}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::mean;
    cfg.n = n;
    cfg.trials = 10000;
    cfg.grid_m = 256;
    cfg.seed = kSeed + 2;
    cfg.workers = hw_workers();
    ExperimentResult r = run_experiment(cfg);
    const double mean = r.stat("mean_total")->value;
    const double target = std::sqrt(4.0 * M_PI * M_PI * n) / (2.0 * std::sqrt(2.0));
    const double rel = std::abs(mean - target) / target;
    ok = ok && rel <= 0.01;
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%lld: mean %.4f vs %.4f (%.3f%%); ", n, mean, target, 100 * rel);
    detail += buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.0f s)", timer.seconds());
  report(2, "mean-law", ok, detail + buf);
}

void criterion3() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (int mult : {16, 32, 64}) {
    long long n = pick_n(mult);
    LatticeSet ls = decompose(n);
    std::vector<double> l4 = closed_form_samples(n, 100000, kSeed + 3);
    double s1 = 0.0, s2 = 0.0;
    for (double v : l4) { s1 += v; s2 += v * v; }
    const double mean = s1 / static_cast<double>(l4.size());
    const double var = s2 / static_cast<double>(l4.size()) - mean * mean;
    const double display = fourth_chaos_variance_exact(ls);
    const double corrected = fourth_chaos_variance_corrected(ls);
    const double rel = std::abs(var - display) / display;
    ok = ok && rel <= 0.03;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "n=%lld (N=%d): sample %.3e vs quoted %.3e (off %.0f%%; the -2/N display %.3e is off %.1f%%); ",
                  n, mult, var, display, 100 * rel, corrected,
                  100 * std::abs(var - corrected) / corrected);
    detail += buf;
  }
  double el = timer.seconds();
  if (el >= 60.0) ok = false;
  char buf[48];
  std::snprintf(buf, sizeof buf, "(%.0f s)", el);
  report(3, "fourth-chaos-variance", ok, detail + buf);
}

void criterion4() {
  Timer timer;
  const long long n = 65;  // N = 16
  auto ls = std::make_shared<const LatticeSet>(decompose(n));
  const int m = 128;  // >= 8 ceil(sqrt 65) = 72
  double worst4 = 0.0, worst2 = 0.0;
  for (int t = 0; t < 100; ++t) {
    RngStream rng(kSeed + 4, t);
    WaveCoefficients c = sample_coefficients(ls, rng);
    const double closed = fourth_chaos_closed_form(c);
    const double quad = chaos_projection_quadrature(c, 4, m);
    worst4 = std::max(worst4, std::abs(closed - quad) / std::abs(closed));
    worst2 = std::max(worst2, std::abs(detail::projection_quadrature_even(c, 2, m)));
  }
  const bool ok = worst4 <= 1e-3 && worst2 <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "100 realizations at n=65, m=128: max q=4 rel gap %.2e (<= 1e-3), max |q=2| %.2e (Berry cancellation) (%.0f s)",
                worst4, worst2, timer.seconds());
  report(4, "chaos-oracle-equivalence", ok, buf);
}

void criterion5() {
  Timer timer;
  std::vector<int> mults{16, 32, 64};
  std::vector<double> dws;
  std::string detail;
  for (int mult : mults) {
    long long n = pick_n(mult);
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::distribution;
    cfg.n = n;
    cfg.trials = 10000;
    cfg.seed = kSeed + 5;
    cfg.workers = hw_workers();
    ExperimentResult r = run_experiment(cfg);
    dws.push_back(r.stat("wasserstein")->value);
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d (n=%lld): d_W=%.4f; ", mult, n, dws.back());
    detail += buf;
  }
  const bool small_enough = dws.back() <= 0.08;
  const bool monotone = dws[0] > dws[1] && dws[1] > dws[2];
  char buf[96];
  std::snprintf(buf, sizeof buf, "d_W(N=64) <= 0.08: %s; decreasing in N: %s (%.0f s)",
                small_enough ? "yes" : "no", monotone ? "yes" : "no", timer.seconds());
  report(5, "non-central-limit", small_enough && monotone, detail + buf);
}

void criterion6() {
  Timer timer;
  bool ok = true;
  double worst = 0.0;
  for (double eta : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    for (double y : {-2.0, -1.0, -0.1}) {
      const double oracle = rate_function_bruteforce(y, eta, 0.0, 300);
      const double analytic = -y / (1.0 + std::abs(eta));
      worst = std::max(worst, std::abs(oracle - analytic));
    }
  }
  ok = worst <= 1e-4;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "constrained-minimization oracle vs -y/(1+|eta|) on the 5x3 grid, worst gap %.2e (singular branches included) (%.1f s)",
                worst, timer.seconds());
  report(6, "rate-function-oracle", ok, buf);
}

void criterion7() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (double eta : {0.0, 0.5, 1.0}) {
    const double target = std::sqrt(1.0 + eta * eta) / (1.0 + std::abs(eta));
    double prev_gap = 1e9, final_slope = 0.0;
    bool monotone = true;
    for (double t = 50.0; t <= 120.0; t += 10.0) {
      const double slope = -log_tail_probability_M_eta(eta, t) / t;
      const double gap = std::abs(slope - target);
      monotone = monotone && gap < prev_gap;
      prev_gap = gap;
      final_slope = slope;
    }
    const double final_rel = std::abs(final_slope - target) / target;
    ok = ok && monotone && final_rel <= 0.05;
    char buf[120];
    std::snprintf(buf, sizeof buf, "eta=%.1f: slope(120)=%.4f vs %.4f (%.1f%%), monotone toward target: %s; ",
                  eta, final_slope, target, 100 * final_rel, monotone ? "yes" : "no");
    detail += buf;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "(%.1f s)", timer.seconds());
  report(7, "tail-slope-quadrature", ok, detail + buf);
}

void criterion8() {
  Timer timer;
  const long long n = pick_n(64);
  LatticeSet ls = decompose(n);
  const double sd = std::sqrt(fourth_chaos_variance_corrected(ls));
  const double eta = mu_hat4(ls).to_double();
  const double rate = rate_function(-1.0, eta);
  std::vector<double> l4 = closed_form_samples(n, 1000000, kSeed + 8);
  for (double& v : l4) v /= sd;

  bool within_band = true, gaps_shrink = true, upper_zero = true;
  double prev_gap = 1e9;
  std::string detail;
  for (double alpha : {1.5, 2.0, 3.0}) {
    long long hits = 0, upper = 0;
    for (double v : l4) {
      if (v <= -alpha) ++hits;
      if (v >= alpha) ++upper;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(l4.size());
    const double slope = -std::log(p) / alpha;
    const double ref = -log_tail_probability_M_eta(eta, alpha) / alpha;
    const double gap = std::abs(slope - rate);
    within_band = within_band && gap <= 0.25 * rate;
    gaps_shrink = gaps_shrink && gap < prev_gap;
    prev_gap = gap;
    upper_zero = upper_zero && upper == 0;
    char buf[180];
    std::snprintf(buf, sizeof buf,
                  "alpha=%.1f: slope %.3f (M_eta quadrature at same threshold %.3f, asymptote %.3f), upper exceedances %lld; ",
                  alpha, slope, ref, rate, upper);
    detail += buf;
  }
  const bool ok = within_band && gaps_shrink && upper_zero;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "within 25%% of I_eta: %s; gap shrinking in alpha: %s; upper tail empty: %s (%.0f s)",
                within_band ? "yes" : "no", gaps_shrink ? "yes" : "no",
                upper_zero ? "yes" : "no", timer.seconds());
  report(8, "moderate-deviation-trend", ok, detail + buf);
}

void criterion9() {
  Timer timer;
  std::vector<int> mults{16, 32, 64};
  std::vector<double> e2s;
  bool ok = true;
  std::string detail;
  for (int mult : mults) {
    long long n = pick_n(mult);
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::correlation;
    cfg.n = n;
    cfg.trials = 2000;
    cfg.radius_s = 0.25;
    cfg.seed = kSeed + 9;
    cfg.workers = hw_workers();
    ExperimentResult r = run_experiment(cfg);
    const double corr = r.stat("corr")->value;
    e2s.push_back(r.stat("mean_sq_std_gap")->value);
    if (mult == 64) {
      const Verdict* cov = r.verdict("cov_identity");
      ok = ok && corr >= 0.9 && cov->pass;
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "N=64 (n=%lld, m=%d): Corr=%.4f (>=0.9), Cov/(pi s^2 Var)=%.4f +- %.4f; ",
                    n, r.config.grid_m, corr, r.stat("cov_over_pis2_var")->value,
                    r.stat("cov_over_pis2_var")->stderr_value);
      detail += buf;
    }
  }
  const bool decreasing = e2s[0] > e2s[1] && e2s[1] > e2s[2];
  ok = ok && decreasing;
  char buf[160];
  std::snprintf(buf, sizeof buf, "E|L~_s - L~|^2 across N=16,32,64: %.3f, %.3f, %.3f (decreasing: %s) (%.0f s)",
                e2s[0], e2s[1], e2s[2], decreasing ? "yes" : "no", timer.seconds());
  report(9, "shrinking-ball-suite", ok, detail + buf);
}

void criterion10() {
  Timer timer;
  // eta ~ 0 sequence with growing multiplicity
  const std::vector<long long> seq{65, 1105, 32045};
  static const std::vector<Eigen::Vector3d> thetas = {
      {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, {0.3, 0.3, 0.3}};
  bool decreasing = true;
  std::string detail;
  for (const auto& theta : thetas) {
    double prev = 1e9;
    detail += "errs(";
    for (long long n : seq) {
      LatticeSet ls = decompose(n);
      const double alpha = std::log(std::log(static_cast<double>(ls.cardinality)));
      const double err = std::abs(cgf_Sn(theta, ls, alpha).value - psi(theta, 0.0));
      decreasing = decreasing && err < prev;
      prev = err;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f ", err);
      detail += buf;
    }
    detail += ") ";
  }
  double worst_eig = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double eta = -1.0 + 0.02 * k;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(gamma_matrix(eta));
    std::vector<double> got{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2],
                            es.eigenvalues()[3]};
    std::vector<double> want{0.0, 1.5, (1.0 - eta) / 8.0, (1.0 + eta) / 4.0};
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 4; ++i) worst_eig = std::max(worst_eig, std::abs(got[i] - want[i]));
  }
  const bool eig_ok = worst_eig <= 1e-12;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "cgf -> psi errors decreasing over N=16,32,64: %s; Gamma eigenvalue sweep worst %.1e (<= 1e-12) (%.1f s)",
                decreasing ? "yes" : "no", worst_eig, timer.seconds());
  report(10, "cgf-convergence", decreasing && eig_ok, detail + buf);
}

void criterion11() {
  Timer timer;
  using nlohmann::ordered_json;
  bool ok = true;
  std::string detail;

  ExperimentConfig grid_cfg;
  grid_cfg.kind = ExperimentKind::mean;
  grid_cfg.n = 5;
  grid_cfg.trials = 200;
  grid_cfg.grid_m = 256;
  grid_cfg.seed = kSeed + 11;

  ExperimentConfig closed_cfg;
  closed_cfg.kind = ExperimentKind::variance;
  closed_cfg.n = 1105;
  closed_cfg.trials = 20000;
  closed_cfg.seed = kSeed + 12;

  for (const ExperimentConfig& base : {grid_cfg, closed_cfg}) {
    std::string reference;
    for (int workers : {1, 4, 16}) {
      ExperimentConfig cfg = base;
      cfg.workers = workers;
      ordered_json j = result_to_json(run_experiment(cfg));
      j.erase("elapsed_seconds");
      j["config"].erase("workers");
      const std::string dump = j.dump();
      if (reference.empty())
        reference = dump;
      else
        ok = ok && dump == reference;
    }
    detail += std::string(to_string(base.kind)) + " reproduced at workers {1,4,16}; ";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "JSON identical up to the workers/elapsed run-identity fields (%.0f s)",
                timer.seconds());
  report(11, "determinism", ok, detail + buf);
}

}  // namespace

int main() {
  std::printf("acceptance suite: arithmetic random wave laboratory\n");
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
