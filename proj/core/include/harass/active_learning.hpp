// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/classifier.hpp"
#include "harass/evaluation.hpp"
#include "harass/lexicon.hpp"

namespace harass {

enum class TaskStatus { Pending, LabeledOnce, Complete, Conflict };

std::string_view to_string(TaskStatus s);
std::optional<TaskStatus> parse_task_status(std::string_view s);

/// The only legal edges: Pending→LabeledOnce, LabeledOnce→Complete,
/// LabeledOnce→Conflict, Conflict→Complete.
bool is_allowed_transition(TaskStatus from, TaskStatus to);

struct AnnotatorLabel {
  std::string annotator;
  LabelSet label;

  bool operator==(const AnnotatorLabel&) const = default;
};

/// Per-head uncertainty 1 - 2|p - 0.5|, combined by max over heads.
double uncertainty(const Prediction& p);

struct AnnotationTask {
  std::string task_id;
  ReviewKey review_ref;
  std::string snapshot_text;
  Prediction model_prediction;
  std::size_t round = 0;
  TaskStatus status = TaskStatus::Pending;
  /// Original submissions in arrival order; kept after conflict resolution.
  std::vector<AnnotatorLabel> labels;
  std::optional<LabelSet> final_label;

  double uncertainty() const { return harass::uncertainty(model_prediction); }
  bool labeled_by(std::string_view annotator) const;
};

struct AnnotationPolicy {
  /// 2 = dual annotation. 1 completes a task on its first label.
  std::size_t annotators_per_task = 2;
};

/// First label: Pending→LabeledOnce. Second: Complete if it equals the
/// first, Conflict otherwise. Throws StateError for a finished task or an
/// annotator labeling twice.
AnnotationTask submit_label(AnnotationTask task, std::string_view annotator, LabelSet label,
                            const AnnotationPolicy& policy = {});

/// Conflict→Complete with `final`; original labels stay readable.
AnnotationTask resolve_conflict(AnnotationTask task, LabelSet final);

/// κ = (p_o - p_e) / (1 - p_e). Throws DomainError on empty or unequal
/// inputs and UndefinedKappaError when p_e = 1.
double cohens_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

struct AgreementReport {
  std::optional<double> kappa_menacing;
  std::optional<double> kappa_profiling;
  /// Tasks with two original labels.
  std::size_t n_items = 0;
};

/// Per-head kappa over every doubly-labeled task, using the original
/// (pre-resolution) labels. Undefined kappas are absent.
AgreementReport agreement(std::span<const AnnotationTask> tasks);

struct ALConfig {
  std::size_t rounds_total = 3;
  std::size_t batch_size = 200;
  TrainConfig train;
  RecallTargets targets;
};

struct ALState {
  std::size_t round_index = 0;
  std::size_t rounds_total = 3;
  std::size_t batch_size = 200;
  std::vector<LabeledReview> labeled_pool;
  std::vector<Review> unlabeled_pool;
  std::optional<LinearModel> model;
  TrainConfig train_config;
  RecallTargets targets;

  /// Starts from the keyword-seeded labels: removes those reviews from the
  /// unlabeled pool and trains the first model, thresholds included.
  static ALState bootstrap(std::vector<LabeledReview> seed_labels,
                           std::vector<Review> unlabeled, const ALConfig& cfg);
};

struct BatchSelection {
  std::vector<AnnotationTask> tasks;
  /// Unlabeled reviews that do not match the lexicon.
  std::size_t eligible = 0;
  bool empty_pool = false;
};

/// The k most uncertain unlabeled reviews that match no lexicon entry, ties
/// broken by review_id (then store and app_id) ascending. Throws StateError
/// without a trained model.
BatchSelection select_batch(const ALState& state, std::size_t k, const KeywordLexicon& lex);

struct RoundSummary {
  std::size_t round = 0;  // 1-based number of the round just finished
  std::size_t new_labels = 0;
  std::size_t labeled_pool = 0;
  std::size_t unlabeled_pool = 0;
  std::optional<Thresholds> thresholds;
  /// Metrics of the cross-fitted scores at those thresholds.
  std::optional<Metrics> validation;
  std::vector<std::string> warnings;
};

nlohmann::json to_json(const RoundSummary& s);

struct RoundOutcome {
  ALState state;
  RoundSummary summary;
};

/// Merges completed tasks into the labeled pool, retrains on the whole pool
/// and advances the round. Throws StateError past `rounds_total` or when a
/// task is not Complete (the message lists the task ids).
RoundOutcome run_round(ALState state, std::span<const AnnotationTask> completed);

}  // namespace harass
