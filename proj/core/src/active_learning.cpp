// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/active_learning.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "harass/error.hpp"

namespace harass {

std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Pending:
      return "pending";
    case TaskStatus::LabeledOnce:
      return "labeled_once";
    case TaskStatus::Complete:
      return "complete";
    case TaskStatus::Conflict:
      return "conflict";
  }
  return "?";
}

std::optional<TaskStatus> parse_task_status(std::string_view s) {
  for (auto st : {TaskStatus::Pending, TaskStatus::LabeledOnce, TaskStatus::Complete,
                  TaskStatus::Conflict}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

bool is_allowed_transition(TaskStatus from, TaskStatus to) {
  switch (from) {
    case TaskStatus::Pending:
      return to == TaskStatus::LabeledOnce;
    case TaskStatus::LabeledOnce:
      return to == TaskStatus::Complete || to == TaskStatus::Conflict;
    case TaskStatus::Conflict:
      return to == TaskStatus::Complete;
    case TaskStatus::Complete:
      return false;
  }
  return false;
}

double uncertainty(const Prediction& p) {
  const double um = 1.0 - 2.0 * std::abs(p.p_menacing - 0.5);
  const double up = 1.0 - 2.0 * std::abs(p.p_profiling - 0.5);
  return std::max(um, up);
}

bool AnnotationTask::labeled_by(std::string_view annotator) const {
  return std::any_of(labels.begin(), labels.end(),
                     [&](const AnnotatorLabel& l) { return l.annotator == annotator; });
}

namespace {

void transition(AnnotationTask& task, TaskStatus to) {
  if (!is_allowed_transition(task.status, to)) {
    throw StateError(fmt::format("task {}: illegal transition {} -> {}", task.task_id,
                                 to_string(task.status), to_string(to)));
  }
  task.status = to;
}

}  // namespace

AnnotationTask submit_label(AnnotationTask task, std::string_view annotator, LabelSet label,
                            const AnnotationPolicy& policy) {
  if (annotator.empty()) throw DomainError("annotator id is empty");
  if (task.status == TaskStatus::Complete || task.status == TaskStatus::Conflict) {
    throw StateError(fmt::format("task {} is {}; no more labels accepted", task.task_id,
                                 to_string(task.status)));
  }
  if (task.labeled_by(annotator)) {
    throw StateError(fmt::format("annotator {} already labeled task {}", annotator, task.task_id));
  }
  task.labels.push_back({std::string(annotator), label});
  if (task.status == TaskStatus::Pending) {
    transition(task, TaskStatus::LabeledOnce);
    if (policy.annotators_per_task <= 1) {
      transition(task, TaskStatus::Complete);
      task.final_label = label;
    }
    return task;
  }
  if (task.labels.front().label == label) {
    transition(task, TaskStatus::Complete);
    task.final_label = label;
  } else {
    transition(task, TaskStatus::Conflict);
  }
  return task;
}

AnnotationTask resolve_conflict(AnnotationTask task, LabelSet final) {
  if (task.status != TaskStatus::Conflict) {
    throw StateError(fmt::format("task {} is {}, not in conflict", task.task_id,
                                 to_string(task.status)));
  }
  transition(task, TaskStatus::Complete);
  task.final_label = final;
  return task;
}

double cohens_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw DomainError("cohens_kappa: label vectors must be non-empty and of equal length");
  }
  const auto n = static_cast<double>(a.size());
  std::size_t agree = 0;
  std::size_t a_true = 0;
  std::size_t b_true = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++agree;
    if (a[i]) ++a_true;
    if (b[i]) ++b_true;
  }
  const double po = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a_true) / n;
  const double pb = static_cast<double>(b_true) / n;
  const double pe = pa * pb + (1.0 - pa) * (1.0 - pb);
  if (pe >= 1.0) throw UndefinedKappaError("cohens_kappa: undefined (p_e = 1)");
  return (po - pe) / (1.0 - pe);
}

AgreementReport agreement(std::span<const AnnotationTask> tasks) {
  std::vector<bool> ma, mb, pa, pb;
  for (const auto& t : tasks) {
    if (t.labels.size() < 2) continue;
    ma.push_back(t.labels[0].label.menacing);
    mb.push_back(t.labels[1].label.menacing);
    pa.push_back(t.labels[0].label.profiling);
    pb.push_back(t.labels[1].label.profiling);
  }
  AgreementReport r;
  r.n_items = ma.size();
  if (r.n_items == 0) return r;
  auto kappa = [](const std::vector<bool>& x, const std::vector<bool>& y) -> std::optional<double> {
    try {
      return cohens_kappa(x, y);
    } catch (const UndefinedKappaError&) {
      return std::nullopt;
    }
  };
  r.kappa_menacing = kappa(ma, mb);
  r.kappa_profiling = kappa(pa, pb);
  return r;
}

ALState ALState::bootstrap(std::vector<LabeledReview> seed_labels, std::vector<Review> unlabeled,
                           const ALConfig& cfg) {
  if (cfg.batch_size == 0) throw DomainError("batch_size must be >= 1");
  ALState s;
  s.rounds_total = cfg.rounds_total;
  s.batch_size = cfg.batch_size;
  s.train_config = cfg.train;
  s.targets = cfg.targets;

  std::set<ReviewKey> labeled_keys;
  for (const auto& l : seed_labels) labeled_keys.insert(l.review.key());
  std::set<ReviewKey> seen;
  for (auto& r : unlabeled) {
    auto key = r.key();
    if (labeled_keys.contains(key) || !seen.insert(key).second) continue;
    s.unlabeled_pool.push_back(std::move(r));
  }
  s.labeled_pool = std::move(seed_labels);
  s.model = fit_with_thresholds(s.labeled_pool, s.train_config, s.targets).model;
  return s;
}

BatchSelection select_batch(const ALState& state, std::size_t k, const KeywordLexicon& lex) {
  if (!state.model) throw StateError("select_batch: no trained model");
  if (k == 0) throw DomainError("select_batch: k must be >= 1");

  struct Candidate {
    const Review* review;
    Prediction prediction;
    double u;
  };
  std::vector<Candidate> pool;
  for (const auto& r : state.unlabeled_pool) {
    if (lex.matches_any(r.text)) continue;
    const auto p = state.model->predict(r.text);
    pool.push_back({&r, p, uncertainty(p)});
  }
  BatchSelection out;
  out.eligible = pool.size();
  out.empty_pool = pool.empty();

  const auto take = std::min(k, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(),
                    [](const Candidate& a, const Candidate& b) {
                      if (a.u != b.u) return a.u > b.u;
                      const auto& ka = a.review->review_id;
                      const auto& kb = b.review->review_id;
                      if (ka != kb) return ka < kb;
                      return a.review->key() < b.review->key();
                    });
  for (std::size_t i = 0; i < take; ++i) {
    AnnotationTask t;
    t.task_id = fmt::format("r{}-{:04d}", state.round_index + 1, i + 1);
    t.review_ref = pool[i].review->key();
    t.snapshot_text = pool[i].review->text;
    t.model_prediction = pool[i].prediction;
    t.round = state.round_index + 1;
    out.tasks.push_back(std::move(t));
  }
  return out;
}

RoundOutcome run_round(ALState state, std::span<const AnnotationTask> completed) {
  if (state.round_index >= state.rounds_total) {
    throw StateError(fmt::format("all {} active-learning rounds are done", state.rounds_total));
  }
  std::vector<std::string> incomplete;
  for (const auto& t : completed) {
    if (t.status != TaskStatus::Complete || !t.final_label) incomplete.push_back(t.task_id);
  }
  if (!incomplete.empty()) {
    std::string ids;
    for (const auto& id : incomplete) ids += (ids.empty() ? "" : ", ") + id;
    throw StateError("incomplete tasks in batch: " + ids);
  }

  std::map<ReviewKey, LabelSet> new_labels;
  for (const auto& t : completed) {
    if (!new_labels.emplace(t.review_ref, *t.final_label).second) {
      throw DomainError("review labeled twice in one batch: " + to_string(t.review_ref));
    }
  }

  RoundSummary summary;
  summary.round = state.round_index + 1;
  summary.new_labels = new_labels.size();

  std::vector<Review> remaining;
  remaining.reserve(state.unlabeled_pool.size());
  std::size_t moved = 0;
  for (auto& r : state.unlabeled_pool) {
    const auto it = new_labels.find(r.key());
    if (it == new_labels.end()) {
      remaining.push_back(std::move(r));
    } else {
      state.labeled_pool.push_back({std::move(r), it->second});
      ++moved;
    }
  }
  if (moved != new_labels.size()) {
    throw DomainError("a labeled task refers to a review outside the unlabeled pool");
  }
  state.unlabeled_pool = std::move(remaining);

  if (new_labels.empty()) summary.warnings.push_back("empty round: retrained on unchanged pool");

  auto fitted = fit_with_thresholds(state.labeled_pool, state.train_config, state.targets);
  summary.thresholds = fitted.selection.thresholds;
  {
    std::vector<SparseVector> x;
    std::vector<LabelSet> y;
    for (const auto& l : state.labeled_pool) {
      x.push_back(featurize(l.review.text, state.train_config.hash_dims));
      y.push_back(l.labels);
    }
    summary.validation =
        evaluate(cross_fitted_scores(x, y, state.train_config), fitted.selection.thresholds);
  }
  if (fitted.selection.fallback_menacing) summary.warnings.push_back("menacing threshold fell back to 0");
  if (fitted.selection.fallback_profiling) summary.warnings.push_back("profiling threshold fell back to 0");

  state.model = std::move(fitted.model);
  ++state.round_index;
  summary.labeled_pool = state.labeled_pool.size();
  summary.unlabeled_pool = state.unlabeled_pool.size();
  return {std::move(state), std::move(summary)};
}

nlohmann::json to_json(const RoundSummary& s) {
  nlohmann::json j = {{"round", s.round},
                      {"new_labels", s.new_labels},
                      {"labeled_pool", s.labeled_pool},
                      {"unlabeled_pool", s.unlabeled_pool},
                      {"warnings", s.warnings}};
  j["thresholds"] = s.thresholds ? to_json(*s.thresholds) : nlohmann::json(nullptr);
  j["validation"] = s.validation ? to_json(*s.validation) : nlohmann::json(nullptr);
  return j;
}

}  // namespace harass
