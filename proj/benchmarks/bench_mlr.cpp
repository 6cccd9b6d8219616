// Microbenchmarks for the hot paths: one estimator step, one generator
// draw, the Gram eigensolve, and a short end-to-end replication. Run with
// --benchmark_min_time=... to tighten confidence; defaults are fine for a
// smoke reading.

#include <benchmark/benchmark.h>

#include <cstdint>

#include "mlr/baselines.hpp"
#include "mlr/config.hpp"
#include "mlr/datagen.hpp"
#include "mlr/estimator.hpp"
#include "mlr/runner.hpp"

namespace {

mlr::EstimatorConfig estimator_config(int d) {
  mlr::EstimatorConfig cfg;
  cfg.d = d;
  cfg.theta0 = mlr::Vector::zeros(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) cfg.theta0[static_cast<std::size_t>(i)] = 0.1;
  cfg.P0 = mlr::SymMatrix::scaled_identity(static_cast<std::size_t>(d), 100.0);
  return cfg;
}

mlr::GeneratorConfig generator_config(int d) {
  mlr::GeneratorConfig cfg;
  cfg.d = d;
  cfg.beta_star = mlr::Vector::zeros(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    cfg.beta_star[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.5;
  }
  return cfg;
}

void BM_EstimatorStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const mlr::EstimatorConfig cfg = estimator_config(d);
  mlr::Generator gen(generator_config(d));
  mlr::EstimatorState st = mlr::new_state(cfg);
  for (auto _ : state) {
    const mlr::LabeledObservation obs = gen.next();
    st = mlr::step(st, obs.phi, obs.y, cfg).state;
    benchmark::DoNotOptimize(st.beta);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_EstimatorStep)->Arg(3)->Arg(8)->Arg(16);

void BM_GeneratorNext(benchmark::State& state) {
  mlr::Generator gen(generator_config(3));
  for (auto _ : state) {
    const mlr::LabeledObservation obs = gen.next();
    benchmark::DoNotOptimize(obs.y);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GeneratorNext);

void BM_GramEigenvalues(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  mlr::GramAccumulator acc(
      mlr::SymMatrix::scaled_identity(static_cast<std::size_t>(d), 100.0));
  mlr::Generator gen(generator_config(d));
  for (int i = 0; i < 500; ++i) acc.add(gen.next().phi);
  for (auto _ : state) {
    const auto extremes = acc.extremes();
    benchmark::DoNotOptimize(extremes);
  }
}
BENCHMARK(BM_GramEigenvalues)->Arg(3)->Arg(8);

void BM_Replication(benchmark::State& state) {
  mlr::RunConfig cfg = mlr::parse_config(R"({
    "generator": {"p": 0.8},
    "horizon": 10000,
    "record_every": 1000
  })");
  for (auto _ : state) {
    const mlr::ReplicationResult res = mlr::run_replication(cfg, 0, false);
    benchmark::DoNotOptimize(res.records);
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Replication);

}  // namespace

BENCHMARK_MAIN();
