// Serial reference against the OpenMP kernels. Run with OMP_NUM_THREADS set
// to compare thread counts.

#include <random>

#include <benchmark/benchmark.h>

#include "dqgp/gp/posterior.hpp"
#include "dqgp/harness/presets.hpp"

using namespace dqgp;
using namespace dqgp::gp;

namespace {

std::vector<Input> inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd;
  std::vector<Input> xs;
  for (std::size_t i = 0; i < n; ++i) {
    const UnitQuaternion q = UnitQuaternion::from_axis_angle(Vec3(nd(eng), nd(eng), nd(eng)), 0.5 * std::abs(nd(eng)));
    xs.push_back(make_input(dq_from_pose(Pose{q, Vec3(nd(eng), nd(eng), nd(eng))})));
  }
  return xs;
}

GPDataset dataset(std::size_t n) {
  std::mt19937_64 eng(7);
  std::normal_distribution<double> nd;
  std::vector<Sample> batch;
  for (const Input& x : inputs(n, 3)) batch.push_back({x, Vec3(nd(eng), nd(eng), nd(eng))});
  return GPDataset(InputSpace::SE3, 0.01, n).push(batch);
}

const KernelConfig kCfg{0.5, 0.4, 1.0};

void BM_GramSerial(benchmark::State& st) {
  const auto xs = inputs(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(serial::gram_matrix(kCfg, InputSpace::SE3, xs));
}
void BM_GramOpenMP(benchmark::State& st) {
  const auto xs = inputs(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(kCfg, InputSpace::SE3, xs));
}

void BM_PredictSerial(benchmark::State& st) {
  const GPPosterior post = fit_posterior(dataset(static_cast<std::size_t>(st.range(0))), kCfg);
  const auto qs = inputs(500, 2);
  for (auto _ : st) benchmark::DoNotOptimize(serial::predict_batch(post, qs));
}
void BM_PredictOpenMP(benchmark::State& st) {
  const GPPosterior post = fit_posterior(dataset(static_cast<std::size_t>(st.range(0))), kCfg);
  const auto qs = inputs(500, 2);
  for (auto _ : st) benchmark::DoNotOptimize(predict_batch(post, qs));
}

HyperGrid small_grid() {
  HyperGrid g;
  g.sigma_f2 = {0.1, 0.5};
  g.ell = {0.2, 0.5, 1.0};
  g.noise_var = {0.01, 0.1};
  return g;
}
void BM_GridSerial(benchmark::State& st) {
  const GPDataset d = dataset(static_cast<std::size_t>(st.range(0)));
  const HyperGrid g = small_grid();
  for (auto _ : st) benchmark::DoNotOptimize(serial::fit_hyperparameters(d, g));
}
void BM_GridOpenMP(benchmark::State& st) {
  const GPDataset d = dataset(static_cast<std::size_t>(st.range(0)));
  const HyperGrid g = small_grid();
  for (auto _ : st) benchmark::DoNotOptimize(fit_hyperparameters(d, g));
}

void BM_Episode(benchmark::State& st) {
  harness::ExperimentConfig c = harness::preset("table-lemniscate");
  for (auto _ : st) benchmark::DoNotOptimize(harness::run_episode(c, 1));
}

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_GramOpenMP)->Arg(100)->Arg(400);
BENCHMARK(BM_PredictSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_PredictOpenMP)->Arg(100)->Arg(400);
BENCHMARK(BM_GridSerial)->Arg(100)->Arg(400);
BENCHMARK(BM_GridOpenMP)->Arg(100)->Arg(400);
BENCHMARK(BM_Episode)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
