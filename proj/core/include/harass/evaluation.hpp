// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/classifier.hpp"

namespace harass {

struct ScoredLabel {
  Prediction prediction;
  LabelSet labels;
};

struct ThresholdSelection {
  Thresholds thresholds;
  /// Per head: no threshold above 0 met the target, so t fell back to 0.
  bool fallback_menacing = false;
  bool fallback_profiling = false;
};

/// Largest t such that the share of `positive_scores` that are >= t reaches
/// `target`. Candidates are the observed scores, so the answer is exact.
/// Throws DomainError if there are no positives.
double select_threshold(std::span<const double> positive_scores, double target);

/// Per-head `select_threshold` over a validation set. Throws DomainError if a
/// head has no positives.
ThresholdSelection select_thresholds(std::span<const ScoredLabel> validation,
                                     const RecallTargets& targets);
ThresholdSelection select_thresholds(const Scorer& model,
                                     std::span<const LabeledReview> validation,
                                     const RecallTargets& targets);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  bool operator==(const Confusion&) const = default;
};

/// Ratios are absent, not zero, when their denominator is zero.
struct HeadMetrics {
  Confusion confusion;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;

  static HeadMetrics from(const Confusion& c);
};

struct Metrics {
  HeadMetrics menacing;
  HeadMetrics profiling;

  const HeadMetrics& at(Head h) const { return h == Head::Menacing ? menacing : profiling; }
  HeadMetrics& at(Head h) { return h == Head::Menacing ? menacing : profiling; }
};

/// Confusion counts under the p >= t rule. Throws DomainError on empty input.
Metrics evaluate(std::span<const ScoredLabel> predictions, const Thresholds& thr);

/// k folds of indices into `labeled`. Within each joint class items are
/// ordered by review key, shuffled with `rng_seed`, and dealt round-robin;
/// the dealing position carries over between classes so fold sizes also
/// stay within one of each other.
std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const LabeledReview> labeled,
                                                       std::size_t k, std::uint64_t rng_seed);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  ThresholdSelection selection;
  Metrics metrics;
};

/// Unweighted mean over folds of each defined ratio; confusion counts are
/// summed.
struct MeanMetrics {
  struct Head {
    Confusion confusion;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
  };
  Head menacing;
  Head profiling;

  const Head& at(harass::Head h) const { return h == harass::Head::Menacing ? menacing : profiling; }
};

struct CrossValidation {
  std::vector<FoldResult> folds;
  MeanMetrics mean;
};

/// Out-of-fold scores for a training set: it is split into `cfg.folds`
/// stratified inner folds and each one is scored by a model trained on the
/// others. These scores, not the in-sample fit, are what thresholds are
/// selected on; in-sample scores of memorized examples sit far above what
/// unseen reviews get.
std::vector<ScoredLabel> cross_fitted_scores(std::span<const SparseVector> features,
                                             std::span<const LabelSet> labels,
                                             const TrainConfig& cfg);

struct FittedModel {
  LinearModel model;
  ThresholdSelection selection;
};

/// Trains on all of `labeled` and attaches thresholds selected on its
/// cross-fitted scores.
FittedModel fit_with_thresholds(std::span<const LabeledReview> labeled, const TrainConfig& cfg,
                                const RecallTargets& targets);

/// For each of `cfg.folds` stratified folds: train on the rest, select
/// thresholds on that training split (cross-fitted scores), evaluate on the
/// held-out fold.
/// Training errors are rethrown as TrainingError("fold i: ...").
CrossValidation cross_validate(std::span<const LabeledReview> labeled, const TrainConfig& cfg,
                               const RecallTargets& targets);

nlohmann::json to_json(const HeadMetrics& m);
nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const CrossValidation& cv);
nlohmann::json to_json(const Thresholds& t);

}  // namespace harass
