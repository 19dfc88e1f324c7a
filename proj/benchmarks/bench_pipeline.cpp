// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "harass/classifier.hpp"
#include "harass/evaluation.hpp"
#include "harass/features.hpp"
#include "harass/rng.hpp"

namespace {

const std::vector<std::string> kWords = {
    "app",    "update", "login",   "crash", "messages", "profile", "match",    "chat",
    "account", "photos", "support", "bug",  "people",   "money",   "phone",    "video",
    "friends", "ads",    "broken",  "slow",  "terrible", "nudes",   "stalker",  "scammer",
    "creepy",  "blocked", "reported", "fake", "again",   "never",   "still",    "really"};

std::vector<harass::LabeledReview> corpus(std::size_t n) {
  harass::Rng rng(1);
  std::vector<harass::LabeledReview> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& lr = out[i];
    lr.review.review_id = std::to_string(i);
    lr.review.app_id = "bench";
    for (std::size_t k = 0, len = 10 + rng.below(30); k < len; ++k) {
      if (k) lr.review.text += ' ';
      lr.review.text += kWords[rng.below(kWords.size())];
    }
    lr.labels = {lr.review.text.find("nudes") != std::string::npos,
                 lr.review.text.find("stalker") != std::string::npos};
  }
  return out;
}

void BM_Featurize(benchmark::State& state) {
  const auto data = corpus(256);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(harass::featurize(data[i++ % data.size()].review.text, 1u << 18));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Featurize);

void BM_Train(benchmark::State& state) {
  const auto data = corpus(static_cast<std::size_t>(state.range(0)));
  harass::TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(harass::train(data, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Train)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_PredictBatch(benchmark::State& state) {
  const auto data = corpus(2000);
  const auto model = harass::train(data, harass::TrainConfig{});
  std::vector<std::string> texts;
  for (const auto& lr : data) texts.push_back(lr.review.text);
  for (auto _ : state) benchmark::DoNotOptimize(model.predict_batch(texts));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(texts.size()));
}
BENCHMARK(BM_PredictBatch)->Unit(benchmark::kMillisecond);

void BM_SelectThreshold(benchmark::State& state) {
  harass::Rng rng(2);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (auto& s : scores) s = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(harass::select_threshold(scores, 0.9));
}
BENCHMARK(BM_SelectThreshold)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
