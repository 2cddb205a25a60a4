#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "arw/chaos.hpp"
#include "arw/errors.hpp"
#include "arw/experiments.hpp"
#include "arw/lattice.hpp"
#include "arw/limits.hpp"
#include "arw/nodal.hpp"
#include "arw/rng.hpp"
#include "arw/wavefield.hpp"

using nlohmann::ordered_json;

namespace {

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) arw::fail("io_error", "cannot open " + out_path);
  out << j.dump(2) << "\n";
}

ordered_json lattice_json(const arw::LatticeSet& ls) {
  ordered_json j;
  j["n"] = ls.n;
  j["N"] = ls.cardinality;
  ordered_json pts = ordered_json::array();
  for (const auto& p : ls.points) pts.push_back({p.x, p.y});
  j["points"] = pts;
  arw::Rational m4 = arw::mu_hat4(ls);
  j["mu4_num"] = m4.num;
  j["mu4_den"] = m4.den;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arw: arithmetic random wave laboratory"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_path, raw_path, config_path;
  app.add_option("--seed", seed, "master RNG seed")->capture_default_str();
  app.add_option("--workers", workers, "worker threads")->capture_default_str();
  app.add_option("--out", out_path, "write JSON result to this path instead of stdout");
  app.add_option("--raw", raw_path, "write per-trial CSV to this path");
  app.add_option("--config", config_path, "JSON experiment config (flags override)");

  // lattice
  auto* lat = app.add_subcommand("lattice", "frequency sets and exact moments");
  auto* lat_dec = lat->add_subcommand("decompose", "enumerate lattice points of energy n");
  long long dec_n = 0;
  lat_dec->add_option("n", dec_n, "energy index")->required();
  auto* lat_search = lat->add_subcommand("search", "find n with mu4 near a target");
  double se_eta = 0.0, se_tol = 0.1;
  long long se_max = 10000;
  int se_min_mult = 8;
  lat_search->add_option("--eta", se_eta, "target fourth Fourier coefficient")->required();
  lat_search->add_option("--tol", se_tol, "tolerance")->capture_default_str();
  lat_search->add_option("--max", se_max, "search bound on n")->capture_default_str();
  lat_search->add_option("--min-mult", se_min_mult, "minimum multiplicity N_n")->capture_default_str();

  // field
  auto* field = app.add_subcommand("field", "sample a wave and export its grid");
  auto* field_grid = field->add_subcommand("grid", "write a binary field grid");
  long long fg_n = 0;
  int fg_m = 0;
  std::string fg_method = "spectral", fg_file;
  field_grid->add_option("--n", fg_n, "energy index")->required();
  field_grid->add_option("--m", fg_m, "grid resolution (0 = auto)")->capture_default_str();
  field_grid->add_option("--method", fg_method, "direct|spectral")->capture_default_str();
  field_grid->add_option("--file", fg_file, "output path")->required();

  // nodal
  auto* nodal = app.add_subcommand("nodal", "nodal length measurement");
  auto* nodal_total = nodal->add_subcommand("total", "total nodal length of one realization");
  auto* nodal_res = nodal->add_subcommand("restricted", "nodal length in a ball");
  long long nd_n = 0;
  int nd_m = 0;
  double nd_radius = 0.25;
  std::string nd_center = "0.5,0.5";
  for (auto* sc : {nodal_total, nodal_res}) {
    sc->add_option("--n", nd_n, "energy index")->required();
    sc->add_option("--grid", nd_m, "grid resolution (0 = auto)");
  }
  nodal_res->add_option("--radius", nd_radius, "ball radius")->capture_default_str();
  nodal_res->add_option("--center", nd_center, "ball centre x,y")->capture_default_str();

  // chaos
  auto* chaos = app.add_subcommand("chaos", "fourth-chaos statistics");
  auto* chaos_sum = chaos->add_subcommand("summary", "closed-form chaos summary of one draw");
  long long ch_n = 0;
  chaos_sum->add_option("--n", ch_n, "energy index")->required();
  auto* chaos_q4 = chaos->add_subcommand("check-q4", "closed form vs projection quadrature");
  long long q4_n = 0;
  int q4_m = 0;
  chaos_q4->add_option("--n", q4_n, "energy index")->required();
  chaos_q4->add_option("--grid", q4_m, "grid resolution (0 = auto)");

  // limits
  auto* limits = app.add_subcommand("limits", "limit law, rate function, tails");
  auto* lim_rate = limits->add_subcommand("rate", "rate function I_eta(y)");
  double lr_eta = 0.0, lr_y = -1.0;
  bool lr_oracle = false;
  lim_rate->add_option("--eta", lr_eta)->required();
  lim_rate->add_option("--y", lr_y)->required();
  lim_rate->add_flag("--oracle", lr_oracle, "also run the constrained-minimization oracle");
  auto* lim_tail = limits->add_subcommand("tail", "P(M_eta <= -t) by quadrature");
  double lt_eta = 0.0, lt_t = 50.0;
  lim_tail->add_option("--eta", lt_eta)->required();
  lim_tail->add_option("--t", lt_t)->required();
  auto* lim_gamma = limits->add_subcommand("gamma", "limit covariance matrices");
  double lg_eta = 0.0;
  lim_gamma->add_option("--eta", lg_eta)->required();

  // experiment
  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment from config");
  std::string ex_kind;
  long long ex_n = 0, ex_trials = 0;
  int ex_grid = -1;
  std::optional<double> ex_radius, ex_alpha;
  std::vector<double> ex_thresholds;
  exp->add_option("--kind", ex_kind, "mean|variance|distribution|tail|correlation|chaos_consistency|cgf");
  exp->add_option("--n", ex_n, "energy index");
  exp->add_option("--trials", ex_trials, "number of trials");
  exp->add_option("--grid", ex_grid, "grid resolution (0 = auto)");
  double ex_radius_v = -1.0, ex_alpha_v = -1.0;
  exp->add_option("--radius", ex_radius_v, "ball radius");
  exp->add_option("--alpha", ex_alpha_v, "MDP speed surrogate");
  exp->add_option("--thresholds", ex_thresholds, "tail thresholds");

  // global flags (--seed, --out, ...) may appear after any subcommand
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (CLI::App* sub : a->get_subcommands([](CLI::App*) { return true; }))
      enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*lat_dec) {
      emit(lattice_json(arw::decompose(dec_n)), out_path);
    } else if (*lat_search) {
      auto hits = arw::search_eta(se_eta, se_tol, se_max, se_min_mult);
      ordered_json j = ordered_json::array();
      for (const auto& h : hits)
        j.push_back({{"n", h.n},
                     {"N", h.multiplicity},
                     {"mu4_num", h.mu4.num},
                     {"mu4_den", h.mu4.den},
                     {"mu4", h.mu4.to_double()}});
      emit(j, out_path);
    } else if (*field_grid) {
      auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(fg_n));
      arw::RngStream rng(seed, 0);
      auto coeffs =
          std::make_shared<const arw::WaveCoefficients>(arw::sample_coefficients(ls, rng));
      int m = fg_m > 0 ? fg_m : arw::default_grid_m(fg_n);
      arw::GridMethod method =
          fg_method == "direct" ? arw::GridMethod::direct : arw::GridMethod::spectral;
      arw::FieldGrid g = arw::evaluate_grid(coeffs, m, method);
      arw::write_grid(g, fg_file);
      ordered_json j{{"n", fg_n}, {"seed", seed}, {"m", m}, {"file", fg_file}};
      emit(j, out_path);
    } else if (*nodal_total || *nodal_res) {
      auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(nd_n));
      arw::RngStream rng(seed, 0);
      auto coeffs =
          std::make_shared<const arw::WaveCoefficients>(arw::sample_coefficients(ls, rng));
      int m = nd_m > 0 ? nd_m : arw::default_grid_m(nd_n);
      long long root = arw::isqrt_floor(nd_n);
      long long ceil_root = root * root == nd_n ? root : root + 1;
      arw::FieldGrid g = arw::evaluate_grid(
          coeffs, m, m > 2 * ceil_root ? arw::GridMethod::spectral : arw::GridMethod::direct);
      arw::NodalMeasurement meas;
      if (*nodal_res) {
        double cx = 0.5, cy = 0.5;
        if (std::sscanf(nd_center.c_str(), "%lf,%lf", &cx, &cy) != 2)
          arw::fail("bad_config", "--center expects x,y");
        meas = arw::nodal_length_restricted(g, cx, cy, nd_radius);
      } else {
        meas = arw::nodal_length(g);
      }
      ordered_json j{{"n", nd_n},
                     {"seed", seed},
                     {"m", meas.m},
                     {"length", meas.length},
                     {"segments", meas.segments}};
      emit(j, out_path);
    } else if (*chaos_sum) {
      auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(ch_n));
      arw::RngStream rng(seed, 0);
      arw::WaveCoefficients coeffs = arw::sample_coefficients(ls, rng);
      arw::ChaosSummary s = arw::chaos_summary(coeffs);
      ordered_json j{{"n", ch_n},
                     {"seed", seed},
                     {"w", {s.w[0], s.w[1], s.w[2], s.w[3]}},
                     {"r_stat", s.r_stat},
                     {"fourth_chaos", s.fourth_chaos},
                     {"m_stat", s.m_stat},
                     {"mu4", s.mu4}};
      emit(j, out_path);
    } else if (*chaos_q4) {
      auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(q4_n));
      arw::RngStream rng(seed, 0);
      arw::WaveCoefficients coeffs = arw::sample_coefficients(ls, rng);
      int m = q4_m > 0 ? q4_m : arw::default_grid_m(q4_n);
      double closed = arw::fourth_chaos_closed_form(coeffs);
      double quad = arw::chaos_projection_quadrature(coeffs, 4, m);
      ordered_json j{{"n", q4_n},
                     {"seed", seed},
                     {"grid", m},
                     {"closed_form", closed},
                     {"quadrature", quad},
                     {"rel_diff", std::abs(closed - quad) / std::max(1e-300, std::abs(closed))}};
      emit(j, out_path);
    } else if (*lim_rate) {
      ordered_json j{{"eta", lr_eta}, {"y", lr_y}, {"value", arw::rate_function(lr_y, lr_eta)}};
      if (lr_oracle && lr_y < 0.0) {
        double oracle = arw::rate_function_bruteforce(lr_y * std::sqrt(1.0 + lr_eta * lr_eta),
                                                      lr_eta, 0.0, 400);
        j["oracle_value"] = oracle;
      }
      emit(j, out_path);
    } else if (*lim_tail) {
      double logp = arw::log_tail_probability_M_eta(lt_eta, lt_t);
      ordered_json j{{"eta", lt_eta},
                     {"t", lt_t},
                     {"probability", std::exp(logp)},
                     {"log_probability", logp},
                     {"slope", -logp / lt_t},
                     {"asymptote", std::sqrt(1.0 + lt_eta * lt_eta) / (1.0 + std::abs(lt_eta))}};
      emit(j, out_path);
    } else if (*lim_gamma) {
      arw::EtaParams p = arw::eta_params(lg_eta);
      ordered_json sig = ordered_json::array(), gam = ordered_json::array();
      for (int i = 0; i < 3; ++i)
        sig.push_back({p.sigma(i, 0), p.sigma(i, 1), p.sigma(i, 2)});
      for (int i = 0; i < 4; ++i)
        gam.push_back({p.gamma(i, 0), p.gamma(i, 1), p.gamma(i, 2), p.gamma(i, 3)});
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(p.gamma);
      ordered_json ev = ordered_json::array();
      for (int i = 0; i < 4; ++i) ev.push_back(es.eigenvalues()[i]);
      emit(ordered_json{{"eta", lg_eta}, {"sigma", sig}, {"gamma", gam}, {"gamma_eigenvalues", ev}},
           out_path);
    } else if (*exp) {
      arw::ExperimentConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) arw::fail("io_error", "cannot open " + config_path);
        ordered_json j = ordered_json::parse(in);
        cfg = arw::config_from_json(j);
      }
      if (!ex_kind.empty()) cfg.kind = arw::experiment_kind_from_string(ex_kind);
      if (ex_n > 0) cfg.n = ex_n;
      if (ex_trials > 0) cfg.trials = ex_trials;
      if (ex_grid >= 0) cfg.grid_m = ex_grid;
      if (ex_radius_v >= 0.0) cfg.radius_s = ex_radius_v;
      if (ex_alpha_v >= 0.0) cfg.alpha = ex_alpha_v;
      if (!ex_thresholds.empty()) cfg.thresholds = ex_thresholds;
      if (app.count("--seed")) cfg.seed = seed;
      if (app.count("--workers")) cfg.workers = workers;
      arw::RawTable raw;
      arw::ExperimentResult res =
          arw::run_experiment(cfg, raw_path.empty() ? nullptr : &raw);
      if (!raw_path.empty()) arw::write_raw_csv(raw, raw_path);
      emit(arw::result_to_json(res), out_path);
    }
  } catch (const arw::Error& e) {
    ordered_json j{{"error", e.code()}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ordered_json j{{"error", "internal"}, {"message", e.what()}};
    std::cout << j.dump() << "\n";
    return 1;
  }
  return 0;
}
