#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "arw/lattice.hpp"

namespace arw {

enum class ExperimentKind { mean, variance, distribution, tail, correlation, chaos_consistency, cgf };

const char* to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentConfig {
  ExperimentKind kind{ExperimentKind::mean};
  long long n{0};
  long long trials{1};
  int grid_m{0};  // 0 = auto (max(256, 8 ceil(sqrt n))) when a grid is needed
  std::optional<double> radius_s;
  std::optional<double> alpha;
  std::vector<double> thresholds;
  std::uint64_t seed{0};
  int workers{1};
};

struct Statistic {
  std::string name;
  double value{0.0};
  double stderr_value{0.0};
};

struct TargetValue {
  std::string name;
  double value{0.0};
};

struct Verdict {
  std::string name;
  bool pass{false};
  double tolerance{0.0};
  double gap{0.0};
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<Statistic> statistics;
  std::vector<TargetValue> targets;
  std::vector<Verdict> verdicts;
  double elapsed_seconds{0.0};

  const Statistic* stat(const std::string& name) const;
  const Verdict* verdict(const std::string& name) const;
};

// Per-trial raw values, one named column per quantity, for --raw CSV dumps.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Runs the configured experiment. Trials are distributed over `workers`
// threads with per-trial RNG substreams keyed by (seed, trial) and fixed-
// order compensated reductions, so results are bit-identical for any worker
// count. If `raw` is non-null the per-trial values are collected.
ExperimentResult run_experiment(const ExperimentConfig& config, RawTable* raw = nullptr);

// Exact empirical 1-Wasserstein distance of equal-size sorted samples: the
// mean absolute difference of order statistics. Throws "size_mismatch".
double wasserstein_1d(const std::vector<double>& a_sorted, const std::vector<double>& b_sorted);

// Planck-scale exponent recorded with radius-dependent configs.
inline constexpr double kPlanckEpsilon = 0.1;

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json result_to_json(const ExperimentResult& result);
std::string result_to_json_string(const ExperimentResult& result);
void write_raw_csv(const RawTable& raw, const std::string& path);

}  // namespace arw
