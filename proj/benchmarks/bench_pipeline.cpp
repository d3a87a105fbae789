#include "tscp/conformal.hpp"
#include "tscp/cox.hpp"
#include "tscp/logistic.hpp"
#include "tscp/scp.hpp"
#include "tscp/synth.hpp"
#include "tscp/weibull_aft.hpp"

#include <benchmark/benchmark.h>

#include <memory>

namespace {

tscp::SyntheticSample sample_of(benchmark::State& state) {
  return tscp::generate(static_cast<std::size_t>(state.range(0)), 200.0, 11);
}

void BM_FitCox(benchmark::State& state) {
  const auto s = sample_of(state);
  const auto split = tscp::split_dataset(s.dataset, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tscp::fit_cox(s.dataset, split.train));
}
BENCHMARK(BM_FitCox)->Arg(400)->Arg(800)->Arg(4000);

void BM_FitWeibull(benchmark::State& state) {
  const auto s = sample_of(state);
  const auto split = tscp::split_dataset(s.dataset, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(tscp::fit_weibull_aft(s.dataset, split.train));
}
BENCHMARK(BM_FitWeibull)->Arg(400)->Arg(800)->Arg(4000);

void BM_CalibrateAndPredict(benchmark::State& state) {
  const auto s = sample_of(state);
  const auto& data = s.dataset;
  const auto split = tscp::split_dataset(data, 0.5, 1);
  auto model = std::make_shared<tscp::WeibullAftModel>(tscp::fit_weibull_aft(data, split.train));
  auto classifier = std::make_shared<tscp::LogisticModel>(tscp::fit_logistic(data, split.train, data.event()));
  for (auto _ : state) {
    const auto predictor = tscp::calibrate(data, split, model, classifier);
    for (std::size_t i = 0; i < 100; ++i) benchmark::DoNotOptimize(predictor.predict(data.row(i)));
  }
}
BENCHMARK(BM_CalibrateAndPredict)->Arg(400)->Arg(4000);

void BM_ScpPredict(benchmark::State& state) {
  const auto s = sample_of(state);
  const auto& data = s.dataset;
  const auto split = tscp::split_dataset(data, 0.5, 1);
  const auto model = tscp::fit_cox(data, split.train);
  const tscp::WeightedCalibration calibration(data, split, model, 0.1);
  const auto grid = tscp::make_time_grid(data);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tscp::scp_predict(calibration, model, data.row(i), grid));
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_ScpPredict)->Arg(400)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
