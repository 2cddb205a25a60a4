#include "arw/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <thread>

#include "arw/chaos.hpp"
#include "arw/detail/quadrature.hpp"
#include "arw/errors.hpp"
#include "arw/limits.hpp"
#include "arw/nodal.hpp"
#include "arw/rng.hpp"
#include "arw/wavefield.hpp"

namespace arw {

using nlohmann::ordered_json;

namespace {

// Runs fn(trial, stream) for every trial on `workers` threads. Each trial
// writes only into its own output slots and draws from its own substream, so
// the outcome is independent of scheduling.
void parallel_trials(long long trials, int workers, std::uint64_t seed,
                     const std::function<void(long long, RngStream&)>& fn) {
  workers = std::max(1, workers);
  std::atomic<long long> next{0};
  auto worker = [&]() {
    while (true) {
      long long t = next.fetch_add(1);
      if (t >= trials) break;
      RngStream stream(seed, static_cast<std::uint64_t>(t));
      fn(t, stream);
    }
  };
  if (workers == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

double compensated_mean(const std::vector<double>& xs) {
  detail::CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

double compensated_mean_sq_dev(const std::vector<double>& xs, double mean) {
  detail::CompensatedSum s;
  for (double x : xs) s.add((x - mean) * (x - mean));
  return s.value();
}

double sample_variance(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  return compensated_mean_sq_dev(xs, mean) / static_cast<double>(xs.size() - 1);
}

double mean_stderr(const std::vector<double>& xs, double mean) {
  return std::sqrt(sample_variance(xs, mean) / static_cast<double>(xs.size()));
}

// Jackknife standard error over `blocks` contiguous trial blocks for an
// arbitrary statistic of the sample.
double jackknife_stderr(const std::vector<double>& xs,
                        const std::function<double(const std::vector<double>&)>& stat,
                        int blocks = 50) {
  const long long n = static_cast<long long>(xs.size());
  blocks = static_cast<int>(std::min<long long>(blocks, n));
  if (blocks < 2) return 0.0;
  std::vector<double> leave_out(blocks);
  for (int b = 0; b < blocks; ++b) {
    std::vector<double> rest;
    rest.reserve(xs.size());
    const long long lo = n * b / blocks, hi = n * (b + 1) / blocks;
    for (long long i = 0; i < n; ++i)
      if (i < lo || i >= hi) rest.push_back(xs[i]);
    leave_out[b] = stat(rest);
  }
  double mean = compensated_mean(leave_out);
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  return std::sqrt(ss * (blocks - 1) / static_cast<double>(blocks));
}

double pearson_corr(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = compensated_mean(a), mb = compensated_mean(b);
  detail::CompensatedSum sab, saa, sbb;
  for (size_t i = 0; i < a.size(); ++i) {
    sab.add((a[i] - ma) * (b[i] - mb));
    saa.add((a[i] - ma) * (a[i] - ma));
    sbb.add((b[i] - mb) * (b[i] - mb));
  }
  return sab.value() / std::sqrt(saa.value() * sbb.value());
}

struct Ctx {
  ExperimentConfig cfg;
  std::shared_ptr<const LatticeSet> lattice;
  double mu4{0.0};
  int grid_m{0};
  GridMethod method{GridMethod::spectral};
};

void add_stat(ExperimentResult& r, const std::string& name, double v, double se = 0.0) {
  r.statistics.push_back({name, v, se});
}
void add_target(ExperimentResult& r, const std::string& name, double v) {
  r.targets.push_back({name, v});
}
// verdict: |value - target| <= max(tolerance, 4 stderr)
void add_verdict(ExperimentResult& r, const std::string& name, double value, double target,
                 double tolerance, double se) {
  const double gap = std::abs(value - target);
  const double allowed = std::max(tolerance, 4.0 * se);
  r.verdicts.push_back({name, gap <= allowed, allowed, gap});
}

Ctx make_ctx(const ExperimentConfig& cfg, bool needs_grid) {
  if (cfg.trials < 1) fail("bad_config", "trials must be >= 1");
  Ctx ctx;
  ctx.cfg = cfg;
  if (cfg.n > 0) {
    ctx.lattice = std::make_shared<const LatticeSet>(decompose(cfg.n));
    ctx.mu4 = mu_hat4(*ctx.lattice).to_double();
    if (needs_grid) {
      long long root = isqrt_floor(cfg.n);
      long long ceil_root = (root * root == cfg.n) ? root : root + 1;
      ctx.grid_m = cfg.grid_m > 0 ? cfg.grid_m : default_grid_m(cfg.n);
      if (ctx.grid_m < 8 * ceil_root)
        fail("bad_config", "grid_m must be at least 8 ceil(sqrt n)");
      ctx.method = ctx.grid_m > 2 * ceil_root ? GridMethod::spectral : GridMethod::direct;
    }
  }
  if (cfg.radius_s) {
    const double s = *cfg.radius_s;
    if (!(s > 0.0 && s < 0.5))
      fail("radius_out_of_range", "radius must lie in (0, 1/2)");
    // The Planck-scale lower bound comes from the shrinking-ball variance and
    // correlation asymptotics, so it gates the correlation kind only.
    if (cfg.kind == ExperimentKind::correlation) {
      const double planck = std::pow(static_cast<double>(cfg.n), -0.5 + kPlanckEpsilon);
      if (s <= planck)
        fail("radius_out_of_range", "radius must exceed n^(-1/2+eps) for correlation runs");
    }
  }
  return ctx;
}

double energy(long long n) { return 4.0 * M_PI * M_PI * static_cast<double>(n); }

// ---- mean -------------------------------------------------------------

ExperimentResult run_mean(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  std::vector<double> total(cfg.trials), restricted;
  const bool with_ball = cfg.radius_s.has_value();
  if (with_ball) restricted.resize(cfg.trials);
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    auto coeffs = std::make_shared<const WaveCoefficients>(sample_coefficients(ctx.lattice, rng));
    FieldGrid g = evaluate_grid(coeffs, ctx.grid_m, ctx.method);
    total[t] = nodal_length(g).length;
    if (with_ball)
      restricted[t] = nodal_length_restricted(g, 0.5, 0.5, *cfg.radius_s).length;
  });

  ExperimentResult r;
  const double target = std::sqrt(energy(cfg.n)) / (2.0 * std::sqrt(2.0));
  const double mt = compensated_mean(total);
  const double se = mean_stderr(total, mt);
  add_stat(r, "mean_total", mt, se);
  add_target(r, "mean_total", target);
  add_verdict(r, "mean_total", mt, target, 0.01 * target, se);
  if (with_ball) {
    const double tr = M_PI * (*cfg.radius_s) * (*cfg.radius_s) * target;
    const double mr = compensated_mean(restricted);
    const double ser = mean_stderr(restricted, mr);
    add_stat(r, "mean_restricted", mr, ser);
    add_target(r, "mean_restricted", tr);
    add_verdict(r, "mean_restricted", mr, tr, 0.01 * tr, ser);
  }
  if (raw) {
    raw->columns = {"trial", "length_total"};
    if (with_ball) raw->columns.push_back("length_restricted");
    for (long long t = 0; t < cfg.trials; ++t) {
      std::vector<double> row{static_cast<double>(t), total[t]};
      if (with_ball) row.push_back(restricted[t]);
      raw->rows.push_back(std::move(row));
    }
  }
  return r;
}

// ---- variance ----------------------------------------------------------

ExperimentResult run_variance(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  ExperimentResult r;
  const double exact_display = fourth_chaos_variance_exact(*ctx.lattice);
  const double exact_corrected = fourth_chaos_variance_corrected(*ctx.lattice);
  const double leading = energy(cfg.n) / (512.0 * ctx.lattice->cardinality * ctx.lattice->cardinality) *
                         (1.0 + ctx.mu4 * ctx.mu4);

  if (cfg.grid_m == 0) {
    // closed-form pipeline
    std::vector<double> l4(cfg.trials);
    parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
      WaveCoefficients c = sample_coefficients(ctx.lattice, rng);
      l4[t] = fourth_chaos_closed_form(c);
    });
    const double mean = compensated_mean(l4);
    const double var = sample_variance(l4, mean);
    auto var_stat = [](const std::vector<double>& xs) {
      double m = compensated_mean(xs);
      return sample_variance(xs, m);
    };
    const double se = jackknife_stderr(l4, var_stat);
    add_stat(r, "var_l4", var, se);
    add_target(r, "var_l4_exact_display", exact_display);
    add_target(r, "var_l4_exact_corrected", exact_corrected);
    add_target(r, "var_l4_leading", leading);
    add_verdict(r, "var_l4_vs_display", var, exact_display, 0.03 * exact_display, se);
    add_verdict(r, "var_l4_vs_corrected", var, exact_corrected, 0.03 * exact_corrected, se);
    if (raw) {
      raw->columns = {"trial", "l4_closed_form"};
      for (long long t = 0; t < cfg.trials; ++t)
        raw->rows.push_back({static_cast<double>(t), l4[t]});
    }
    return r;
  }

  // grid pipeline
  std::vector<double> lengths(cfg.trials);
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    auto coeffs = std::make_shared<const WaveCoefficients>(sample_coefficients(ctx.lattice, rng));
    FieldGrid g = evaluate_grid(coeffs, ctx.grid_m, ctx.method);
    lengths[t] = nodal_length(g).length;
  });
  const double mean = compensated_mean(lengths);
  const double var = sample_variance(lengths, mean);
  auto var_stat = [](const std::vector<double>& xs) {
    double m = compensated_mean(xs);
    return sample_variance(xs, m);
  };
  const double se = jackknife_stderr(lengths, var_stat);
  add_stat(r, "var_total", var, se);
  add_stat(r, "var_total_over_leading", var / leading, se / leading);
  add_target(r, "var_l4_leading", leading);
  add_target(r, "var_l4_exact_corrected", exact_corrected);
  add_verdict(r, "var_total_vs_leading", var, leading, 0.20 * leading, se);
  if (raw) {
    raw->columns = {"trial", "length_total"};
    for (long long t = 0; t < cfg.trials; ++t)
      raw->rows.push_back({static_cast<double>(t), lengths[t]});
  }
  return r;
}

// ---- distribution -------------------------------------------------------

ExperimentResult run_distribution(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  // standardize the closed form by the empirically exact variance; the
  // comparison sample is M_eta at eta = mu4(n), drawn from a disjoint
  // substream lane.
  const double sd = std::sqrt(fourth_chaos_variance_corrected(*ctx.lattice));
  std::vector<double> l4(cfg.trials), meta(cfg.trials);
  const double eta = ctx.mu4;
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    WaveCoefficients c = sample_coefficients(ctx.lattice, rng);
    l4[t] = fourth_chaos_closed_form(c) / sd;
    RngStream mrng(cfg.seed ^ 0x4d455441u, static_cast<std::uint64_t>(t));
    meta[t] = sample_M_eta(eta, mrng);
  });
  std::vector<double> a = l4, b = meta;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double dw = wasserstein_1d(a, b);

  ExperimentResult r;
  add_stat(r, "wasserstein", dw, 0.0);
  add_stat(r, "eta", eta, 0.0);
  add_target(r, "wasserstein_bound", 0.08);
  add_verdict(r, "wasserstein", dw, 0.0, 0.08, 0.0);
  if (raw) {
    raw->columns = {"trial", "l4_standardized", "m_eta"};
    for (long long t = 0; t < cfg.trials; ++t)
      raw->rows.push_back({static_cast<double>(t), l4[t], meta[t]});
  }
  return r;
}

// ---- tail ---------------------------------------------------------------

ExperimentResult run_tail(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  if (!cfg.alpha) fail("bad_config", "tail experiment requires alpha");
  const double alpha = *cfg.alpha;
  std::vector<double> thresholds = cfg.thresholds.empty() ? std::vector<double>{1.0}
                                                          : cfg.thresholds;
  const double sd = std::sqrt(fourth_chaos_variance_corrected(*ctx.lattice));
  std::vector<double> l4(cfg.trials);
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    WaveCoefficients c = sample_coefficients(ctx.lattice, rng);
    l4[t] = fourth_chaos_closed_form(c) / sd;
  });

  ExperimentResult r;
  const double eta = ctx.mu4;
  for (double y : thresholds) {
    if (y <= 0.0) fail("bad_config", "tail thresholds must be positive");
    long long hits = 0, upper = 0;
    for (double v : l4) {
      if (v <= -y * alpha) ++hits;
      if (v >= y * alpha) ++upper;
    }
    if (hits < 50)
      fail("insufficient_tail_mass", "fewer than 50 exceedances at threshold " + std::to_string(y));
    const double p = static_cast<double>(hits) / static_cast<double>(cfg.trials);
    const double slope = -std::log(p) / alpha;
    // binomial delta-method error on -log(p)/alpha
    const double se = std::sqrt((1.0 - p) / (p * static_cast<double>(cfg.trials))) / alpha;
    const double slope_ref = -log_tail_probability_M_eta(eta, y * alpha) / alpha;
    const double asymptote = rate_function(-y, eta);
    const std::string tag = "y=" + std::to_string(y);
    add_stat(r, "slope_empirical[" + tag + "]", slope, se);
    add_stat(r, "slope_m_eta_quadrature[" + tag + "]", slope_ref, 0.0);
    add_stat(r, "upper_exceedances[" + tag + "]", static_cast<double>(upper), 0.0);
    add_target(r, "rate_asymptote[" + tag + "]", asymptote);
    add_verdict(r, "slope_vs_asymptote[" + tag + "]", slope, asymptote, 0.25 * asymptote, se);
    add_verdict(r, "slope_vs_quadrature[" + tag + "]", slope, slope_ref, 0.25 * slope_ref, se);
  }
  if (raw) {
    raw->columns = {"trial", "l4_standardized"};
    for (long long t = 0; t < cfg.trials; ++t)
      raw->rows.push_back({static_cast<double>(t), l4[t]});
  }
  return r;
}

// ---- correlation ----------------------------------------------------------

ExperimentResult run_correlation(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  if (!cfg.radius_s) fail("bad_config", "correlation experiment requires radius_s");
  const double s = *cfg.radius_s;
  std::vector<double> total(cfg.trials), restricted(cfg.trials);
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    auto coeffs = std::make_shared<const WaveCoefficients>(sample_coefficients(ctx.lattice, rng));
    FieldGrid g = evaluate_grid(coeffs, ctx.grid_m, ctx.method);
    total[t] = nodal_length(g).length;
    restricted[t] = nodal_length_restricted(g, 0.5, 0.5, s).length;
  });

  ExperimentResult r;
  const double corr = pearson_corr(restricted, total);
  const double mt = compensated_mean(total);
  const double vt = sample_variance(total, mt);
  const double mr = compensated_mean(restricted);
  detail::CompensatedSum cov_acc;
  for (long long t = 0; t < cfg.trials; ++t)
    cov_acc.add((total[t] - mt) * (restricted[t] - mr));
  const double cov = cov_acc.value() / static_cast<double>(cfg.trials - 1);
  const double cov_ratio = cov / (M_PI * s * s * vt);

  // jackknife over paired blocks for corr and cov_ratio
  const int blocks = 50;
  auto paired_jackknife = [&](const std::function<double(const std::vector<double>&,
                                                         const std::vector<double>&)>& f) {
    const long long n = cfg.trials;
    const int B = static_cast<int>(std::min<long long>(blocks, n));
    if (B < 2) return 0.0;
    std::vector<double> lo_vals(B);
    for (int bI = 0; bI < B; ++bI) {
      std::vector<double> ta, ra;
      const long long lo = n * bI / B, hi = n * (bI + 1) / B;
      for (long long i = 0; i < n; ++i)
        if (i < lo || i >= hi) {
          ta.push_back(total[i]);
          ra.push_back(restricted[i]);
        }
      lo_vals[bI] = f(ta, ra);
    }
    double m = compensated_mean(lo_vals);
    double ss = 0.0;
    for (double v : lo_vals) ss += (v - m) * (v - m);
    return std::sqrt(ss * (B - 1) / static_cast<double>(B));
  };
  const double corr_se = paired_jackknife([](const std::vector<double>& ta, const std::vector<double>& ra) {
    return pearson_corr(ra, ta);
  });
  const double ratio_se = paired_jackknife([&](const std::vector<double>& ta, const std::vector<double>& ra) {
    double mta = compensated_mean(ta), mra = compensated_mean(ra);
    detail::CompensatedSum c2;
    for (size_t i = 0; i < ta.size(); ++i) c2.add((ta[i] - mta) * (ra[i] - mra));
    double cv = c2.value() / static_cast<double>(ta.size() - 1);
    return cv / (M_PI * s * s * sample_variance(ta, mta));
  });

  add_stat(r, "corr", corr, corr_se);
  add_stat(r, "cov_over_pis2_var", cov_ratio, ratio_se);
  add_stat(r, "mean_sq_std_gap", 2.0 - 2.0 * corr, 2.0 * corr_se);
  add_target(r, "corr_floor", 0.9);
  add_target(r, "cov_identity", 1.0);
  r.verdicts.push_back({"corr_at_least_0.9", corr >= 0.9, 0.0, std::max(0.0, 0.9 - corr)});
  add_verdict(r, "cov_identity", cov_ratio, 1.0, 0.0, ratio_se);
  if (raw) {
    raw->columns = {"trial", "length_total", "length_restricted"};
    for (long long t = 0; t < cfg.trials; ++t)
      raw->rows.push_back({static_cast<double>(t), total[t], restricted[t]});
  }
  return r;
}

// ---- chaos consistency ------------------------------------------------------

ExperimentResult run_chaos_consistency(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  std::vector<double> closed(cfg.trials), quad(cfg.trials), lengths(cfg.trials);
  parallel_trials(cfg.trials, cfg.workers, cfg.seed, [&](long long t, RngStream& rng) {
    auto coeffs = std::make_shared<const WaveCoefficients>(sample_coefficients(ctx.lattice, rng));
    closed[t] = fourth_chaos_closed_form(*coeffs);
    quad[t] = chaos_projection_quadrature(*coeffs, 4, ctx.grid_m);
    FieldGrid g = evaluate_grid(coeffs, ctx.grid_m, ctx.method);
    lengths[t] = nodal_length(g).length;
  });

  ExperimentResult r;
  double max_rel = 0.0;
  for (long long t = 0; t < cfg.trials; ++t) {
    const double denom = std::max(std::abs(closed[t]), 1e-12);
    max_rel = std::max(max_rel, std::abs(closed[t] - quad[t]) / denom);
  }
  const double sdL = std::sqrt(fourth_chaos_variance_corrected(*ctx.lattice));
  const double mean_len = compensated_mean(lengths);
  const double var_len = sample_variance(lengths, mean_len);
  detail::CompensatedSum gap2;
  for (long long t = 0; t < cfg.trials; ++t) {
    const double lt = (lengths[t] - mean_len) / std::sqrt(var_len);
    const double l4t = closed[t] / sdL;
    gap2.add((lt - l4t) * (lt - l4t));
  }
  const double residual = gap2.value() / static_cast<double>(cfg.trials);
  const double N = ctx.lattice->cardinality;
  add_stat(r, "max_rel_gap_q4", max_rel, 0.0);
  add_stat(r, "residual_second_moment", residual, 0.0);
  add_stat(r, "residual_times_sqrtN", residual * std::sqrt(N), 0.0);
  add_target(r, "max_rel_gap_bound", 1e-3);
  r.verdicts.push_back({"q4_oracle_equivalence", max_rel < 1e-3, 1e-3, max_rel});
  if (raw) {
    raw->columns = {"trial", "l4_closed_form", "l4_quadrature", "length_total"};
    for (long long t = 0; t < cfg.trials; ++t)
      raw->rows.push_back({static_cast<double>(t), closed[t], quad[t], lengths[t]});
  }
  return r;
}

// ---- cgf ---------------------------------------------------------------------

ExperimentResult run_cgf(const Ctx& ctx, RawTable* raw) {
  const auto& cfg = ctx.cfg;
  const double N = ctx.lattice->cardinality;
  const double alpha = cfg.alpha ? *cfg.alpha : std::log(std::log(N));
  if (!(alpha > 0.0)) fail("bad_config", "cgf experiment needs alpha > 0 (N too small for log log N)");
  static const std::vector<Eigen::Vector3d> kThetas = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0},
      {0.4, 0.3, -0.5}, {-0.6, 0.2, 0.1}};
  ExperimentResult r;
  double worst = 0.0, speed_ratio = 0.0;
  for (size_t i = 0; i < kThetas.size(); ++i) {
    CgfResult c = cgf_Sn(kThetas[i], *ctx.lattice, alpha);
    const double target = psi(kThetas[i], ctx.mu4);
    const double target0 = psi(kThetas[i], 0.0);
    const std::string tag = "theta" + std::to_string(i);
    add_stat(r, "cgf[" + tag + "]", c.value, 0.0);
    add_target(r, "psi_eta_n[" + tag + "]", target);
    add_target(r, "psi_eta_0[" + tag + "]", target0);
    worst = std::max(worst, std::abs(c.value - target0));
    speed_ratio = c.speed_ratio;
  }
  add_stat(r, "max_abs_error_vs_psi0", worst, 0.0);
  add_stat(r, "speed_ratio", speed_ratio, 0.0);
  if (raw) {
    raw->columns = {"theta_index", "cgf_value"};
    for (size_t i = 0; i < kThetas.size(); ++i) {
      CgfResult c = cgf_Sn(kThetas[i], *ctx.lattice, alpha);
      raw->rows.push_back({static_cast<double>(i), c.value});
    }
  }
  return r;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::mean: return "mean";
    case ExperimentKind::variance: return "variance";
    case ExperimentKind::distribution: return "distribution";
    case ExperimentKind::tail: return "tail";
    case ExperimentKind::correlation: return "correlation";
    case ExperimentKind::chaos_consistency: return "chaos_consistency";
    case ExperimentKind::cgf: return "cgf";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "mean") return ExperimentKind::mean;
  if (s == "variance") return ExperimentKind::variance;
  if (s == "distribution") return ExperimentKind::distribution;
  if (s == "tail") return ExperimentKind::tail;
  if (s == "correlation") return ExperimentKind::correlation;
  if (s == "chaos_consistency") return ExperimentKind::chaos_consistency;
  if (s == "cgf") return ExperimentKind::cgf;
  fail("bad_config", "unknown experiment kind: " + s);
}

const Statistic* ExperimentResult::stat(const std::string& name) const {
  for (const auto& s : statistics)
    if (s.name == name) return &s;
  return nullptr;
}

const Verdict* ExperimentResult::verdict(const std::string& name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

ExperimentResult run_experiment(const ExperimentConfig& config, RawTable* raw) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool needs_grid =
      config.kind == ExperimentKind::mean || config.kind == ExperimentKind::correlation ||
      config.kind == ExperimentKind::chaos_consistency ||
      (config.kind == ExperimentKind::variance && config.grid_m > 0);
  Ctx ctx = make_ctx(config, needs_grid);
  ExperimentResult r;
  switch (config.kind) {
    case ExperimentKind::mean: r = run_mean(ctx, raw); break;
    case ExperimentKind::variance: r = run_variance(ctx, raw); break;
    case ExperimentKind::distribution: r = run_distribution(ctx, raw); break;
    case ExperimentKind::tail: r = run_tail(ctx, raw); break;
    case ExperimentKind::correlation: r = run_correlation(ctx, raw); break;
    case ExperimentKind::chaos_consistency: r = run_chaos_consistency(ctx, raw); break;
    case ExperimentKind::cgf: r = run_cgf(ctx, raw); break;
  }
  r.config = config;
  r.config.grid_m = ctx.grid_m > 0 ? ctx.grid_m : config.grid_m;
  r.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

double wasserstein_1d(const std::vector<double>& a_sorted, const std::vector<double>& b_sorted) {
  if (a_sorted.size() != b_sorted.size() || a_sorted.empty())
    fail("size_mismatch", "wasserstein_1d needs equal nonempty sample sizes");
  detail::CompensatedSum s;
  for (size_t i = 0; i < a_sorted.size(); ++i)
    s.add(std::abs(a_sorted[i] - b_sorted[i]));
  return s.value() / static_cast<double>(a_sorted.size());
}

ordered_json config_to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["trials"] = c.trials;
  j["grid_m"] = c.grid_m;
  if (c.radius_s) {
    j["radius_s"] = *c.radius_s;
    j["planck_epsilon"] = kPlanckEpsilon;
  } else {
    j["radius_s"] = nullptr;
  }
  if (c.alpha)
    j["alpha"] = *c.alpha;
  else
    j["alpha"] = nullptr;
  j["thresholds"] = c.thresholds;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  return j;
}

ExperimentConfig config_from_json(const ordered_json& j) {
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
  c.n = j.value("n", 0LL);
  c.trials = j.value("trials", 1LL);
  c.grid_m = j.value("grid_m", 0);
  if (j.contains("radius_s") && !j["radius_s"].is_null())
    c.radius_s = j["radius_s"].get<double>();
  if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
  if (j.contains("thresholds")) c.thresholds = j["thresholds"].get<std::vector<double>>();
  c.seed = j.value("seed", static_cast<std::uint64_t>(0));
  c.workers = j.value("workers", 1);
  return c;
}

ordered_json result_to_json(const ExperimentResult& r) {
  ordered_json j;
  j["config"] = config_to_json(r.config);
  j["statistics"] = ordered_json::array();
  for (const auto& s : r.statistics)
    j["statistics"].push_back({{"name", s.name}, {"value", s.value}, {"stderr", s.stderr_value}});
  j["targets"] = ordered_json::array();
  for (const auto& t : r.targets) j["targets"].push_back({{"name", t.name}, {"value", t.value}});
  j["verdicts"] = ordered_json::array();
  for (const auto& v : r.verdicts)
    j["verdicts"].push_back(
        {{"name", v.name}, {"pass", v.pass}, {"tolerance", v.tolerance}, {"gap", v.gap}});
  j["elapsed_seconds"] = r.elapsed_seconds;
  return j;
}

std::string result_to_json_string(const ExperimentResult& r) {
  return result_to_json(r).dump(2);
}

void write_raw_csv(const RawTable& raw, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("io_error", "cannot open " + path);
  for (size_t i = 0; i < raw.columns.size(); ++i) {
    if (i) out << ",";
    out << raw.columns[i];
  }
  out << "\n";
  out.precision(17);
  for (const auto& row : raw.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
}

}  // namespace arw
