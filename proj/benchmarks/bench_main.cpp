#include <benchmark/benchmark.h>

#include "srcv/cv_model.hpp"
#include "srcv/estimators.hpp"
#include "srcv/path_set.hpp"

using namespace srcv;

namespace {

const BuiltinModel& gbm1d() {
  static const BuiltinModel b = builtin_model("gbm1d_highvol");
  return b;
}

const BuiltinModel& gbm10d() {
  static const BuiltinModel b = builtin_model("gbm10d");
  return b;
}

void BM_simulate_gbm10d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(gbm10d().model, Scheme::euler1, 20, n, 1));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * 20);
}
BENCHMARK(BM_simulate_gbm10d)->Arg(1000)->Arg(10000);

void BM_simulate_heston9d(benchmark::State& state) {
  const auto b = builtin_model("heston9d");
  for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(b.model, Scheme::heston_trunc, 20, 5000, 1));
  state.SetItemsProcessed(state.iterations() * 5000 * 20);
}
BENCHMARK(BM_simulate_heston9d);

void BM_train(benchmark::State& state, CvMethod method) {
  const auto paths = simulate_paths(gbm1d().model, Scheme::euler1, 20, 10000, 1);
  const BasisSet basis(1, 1, gbm1d().payoff);
  for (auto _ : state) benchmark::DoNotOptimize(train(method, paths, basis, gbm1d().payoff));
}
BENCHMARK_CAPTURE(BM_train, srcv, CvMethod::srcv);
BENCHMARK_CAPTURE(BM_train, rrcv, CvMethod::rrcv);
BENCHMARK_CAPTURE(BM_train, rcv, CvMethod::rcv);

void BM_train_gbm10d_simplified(benchmark::State& state) {
  const auto paths = simulate_paths(gbm10d().model, Scheme::euler1, 10, 5000, 1);
  const BasisSet basis(10, 1, gbm10d().payoff);
  for (auto _ : state)
    benchmark::DoNotOptimize(train_srcv(paths, basis, gbm10d().payoff, {.simplified = true}));
}
BENCHMARK(BM_train_gbm10d_simplified);

void BM_evaluate(benchmark::State& state, CvMethod method) {
  const auto training = simulate_paths(gbm1d().model, Scheme::euler1, 20, 5000, 1);
  const auto testing = simulate_paths(gbm1d().model, Scheme::euler1, 20, 20000, 2);
  const BasisSet basis(1, 1, gbm1d().payoff);
  const auto cv = train(method, training, basis, gbm1d().payoff);
  for (auto _ : state) benchmark::DoNotOptimize(martingale_values(testing, cv));
  state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK_CAPTURE(BM_evaluate, srcv, CvMethod::srcv);
BENCHMARK_CAPTURE(BM_evaluate, rrcv, CvMethod::rrcv);
BENCHMARK_CAPTURE(BM_evaluate, rcv, CvMethod::rcv);

}  // namespace
BENCHMARK_MAIN();
