#include <benchmark/benchmark.h>

#include <memory>

#include "arw/chaos.hpp"
#include "arw/lattice.hpp"
#include "arw/limits.hpp"
#include "arw/nodal.hpp"
#include "arw/rng.hpp"
#include "arw/wavefield.hpp"

namespace {

std::shared_ptr<const arw::WaveCoefficients> coeffs_for(long long n) {
  auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(n));
  arw::RngStream rng(7, 0);
  return std::make_shared<const arw::WaveCoefficients>(arw::sample_coefficients(ls, rng));
}

void BM_decompose(benchmark::State& state) {
  const long long n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(arw::decompose(n));
}
BENCHMARK(BM_decompose)->Arg(1105)->Arg(32045);

void BM_grid_spectral(benchmark::State& state) {
  auto c = coeffs_for(state.range(0));
  const int m = arw::default_grid_m(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(arw::evaluate_grid(c, m, arw::GridMethod::spectral));
  state.SetLabel("m=" + std::to_string(m));
}
BENCHMARK(BM_grid_spectral)->Arg(5)->Arg(1105)->Arg(32045)->Unit(benchmark::kMillisecond);

void BM_grid_direct(benchmark::State& state) {
  auto c = coeffs_for(5);
  for (auto _ : state)
    benchmark::DoNotOptimize(arw::evaluate_grid(c, 256, arw::GridMethod::direct));
}
BENCHMARK(BM_grid_direct)->Unit(benchmark::kMillisecond);

void BM_nodal_length(benchmark::State& state) {
  auto c = coeffs_for(state.range(0));
  const int m = arw::default_grid_m(state.range(0));
  arw::FieldGrid g = arw::evaluate_grid(c, m, arw::GridMethod::spectral);
  for (auto _ : state) benchmark::DoNotOptimize(arw::nodal_length(g));
  state.SetLabel("m=" + std::to_string(m));
}
BENCHMARK(BM_nodal_length)->Arg(5)->Arg(1105)->Arg(32045)->Unit(benchmark::kMillisecond);

void BM_fourth_chaos_closed_form(benchmark::State& state) {
  auto ls = std::make_shared<const arw::LatticeSet>(arw::decompose(32045));
  std::uint64_t t = 0;
  for (auto _ : state) {
    arw::RngStream rng(7, t++);
    arw::WaveCoefficients c = arw::sample_coefficients(ls, rng);
    benchmark::DoNotOptimize(arw::fourth_chaos_closed_form(c));
  }
}
BENCHMARK(BM_fourth_chaos_closed_form);

void BM_tail_quadrature(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(arw::log_tail_probability_M_eta(0.5, 100.0));
}
BENCHMARK(BM_tail_quadrature);

void BM_rate_oracle(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(arw::rate_function_bruteforce(-1.0, 0.5, 0.0, 300));
}
BENCHMARK(BM_rate_oracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
