// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/evaluation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <nlohmann/json.hpp>

#include "harass/error.hpp"
#include "harass/rng.hpp"

namespace harass {

double select_threshold(std::span<const double> positive_scores, double target) {
  if (positive_scores.empty()) throw DomainError("select_threshold: no positives");
  if (!(target >= 0.0 && target <= 1.0)) throw DomainError("recall target must be in [0,1]");
  const auto p = static_cast<double>(positive_scores.size());

  // Smallest k with k / P >= target, evaluated the same way recall is.
  auto k = static_cast<std::size_t>(std::max(0.0, std::floor(target * p) - 1.0));
  while (static_cast<double>(k) / p < target) ++k;
  if (k == 0) return 1.0;

  std::vector<double> sorted(positive_scores.begin(), positive_scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   sorted.end(), std::greater<>());
  return std::clamp(sorted[k - 1], 0.0, 1.0);
}

ThresholdSelection select_thresholds(std::span<const ScoredLabel> validation,
                                     const RecallTargets& targets) {
  targets.validate();
  ThresholdSelection sel;
  sel.thresholds.recall_target_menacing = targets.menacing;
  sel.thresholds.recall_target_profiling = targets.profiling;
  for (Head h : kHeads) {
    std::vector<double> positives;
    for (const auto& s : validation) {
      if (s.labels.at(h)) positives.push_back(s.prediction.at(h));
    }
    if (positives.empty()) {
      throw DomainError(fmt::format("select_thresholds: no positives for head {}", to_string(h)));
    }
    const double t = select_threshold(positives, targets.at(h));
    sel.thresholds.at(h) = t;
    const bool fallback = t <= 0.0;
    (h == Head::Menacing ? sel.fallback_menacing : sel.fallback_profiling) = fallback;
  }
  return sel;
}

ThresholdSelection select_thresholds(const Scorer& model,
                                     std::span<const LabeledReview> validation,
                                     const RecallTargets& targets) {
  std::vector<std::string> texts;
  texts.reserve(validation.size());
  for (const auto& v : validation) texts.push_back(v.review.text);
  const auto preds = model.predict_batch(texts);
  std::vector<ScoredLabel> scored;
  scored.reserve(validation.size());
  for (std::size_t i = 0; i < validation.size(); ++i) {
    scored.push_back({preds[i], validation[i].labels});
  }
  return select_thresholds(scored, targets);
}

HeadMetrics HeadMetrics::from(const Confusion& c) {
  HeadMetrics m;
  m.confusion = c;
  if (c.tp + c.fp > 0) m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (m.precision && m.recall) {
    const double s = *m.precision + *m.recall;
    m.f1 = s > 0.0 ? 2.0 * *m.precision * *m.recall / s : 0.0;
  }
  return m;
}

Metrics evaluate(std::span<const ScoredLabel> predictions, const Thresholds& thr) {
  if (predictions.empty()) throw DomainError("evaluate: empty prediction list");
  std::array<Confusion, 2> conf{};
  for (const auto& s : predictions) {
    for (Head h : kHeads) {
      auto& c = conf[static_cast<std::size_t>(h)];
      const bool predicted = s.prediction.at(h) >= thr.at(h);
      const bool actual = s.labels.at(h);
      if (predicted && actual) {
        ++c.tp;
      } else if (predicted) {
        ++c.fp;
      } else if (actual) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return {HeadMetrics::from(conf[0]), HeadMetrics::from(conf[1])};
}

std::vector<std::vector<std::size_t>> stratified_kfold(std::span<const LabeledReview> labeled,
                                                       std::size_t k, std::uint64_t rng_seed) {
  if (k < 2) throw DomainError("stratified_kfold: k must be >= 2");
  if (k > labeled.size()) {
    throw DomainError(fmt::format("stratified_kfold: k={} exceeds {} items", k, labeled.size()));
  }
  std::array<std::vector<std::size_t>, kJointClassCount> by_class;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    by_class[static_cast<std::size_t>(labeled[i].labels.joint())].push_back(i);
  }

  Rng rng(rng_seed);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& members : by_class) {
    std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return labeled[a].review.key() < labeled[b].review.key();
    });
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t idx : members) {
      folds[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<ScoredLabel> cross_fitted_scores(std::span<const SparseVector> x,
                                             std::span<const LabelSet> y, const TrainConfig& cfg) {
  if (x.size() != y.size()) throw DomainError("features/labels size mismatch");
  std::vector<LabeledReview> keyed(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    keyed[i].review.review_id = fmt::format("{:010d}", i);
    keyed[i].labels = y[i];
  }
  const auto inner = stratified_kfold(keyed, std::min(cfg.folds, x.size()), cfg.rng_seed + 1);
  std::vector<ScoredLabel> out(x.size());
  std::vector<char> in_fold(x.size());
  for (const auto& fold : inner) {
    std::fill(in_fold.begin(), in_fold.end(), 0);
    for (std::size_t i : fold) in_fold[i] = 1;
    std::vector<SparseVector> tx;
    std::vector<LabelSet> ty;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (in_fold[i]) continue;
      tx.push_back(x[i]);
      ty.push_back(y[i]);
    }
    const auto model = train_features(tx, ty, cfg);
    for (std::size_t i : fold) out[i] = {model.predict_features(x[i]), y[i]};
  }
  return out;
}

FittedModel fit_with_thresholds(std::span<const LabeledReview> labeled, const TrainConfig& cfg,
                                const RecallTargets& targets) {
  cfg.validate();
  targets.validate();
  std::vector<SparseVector> x;
  std::vector<LabelSet> y;
  for (const auto& lr : labeled) {
    x.push_back(featurize(lr.review.text, cfg.hash_dims));
    y.push_back(lr.labels);
  }
  if (x.size() < cfg.folds) {
    throw TrainingError(
        fmt::format("need at least {} labeled reviews to select thresholds", cfg.folds));
  }
  auto model = train_features(x, y, cfg);
  auto selection = select_thresholds(cross_fitted_scores(x, y, cfg), targets);
  model.thresholds = selection.thresholds;
  return {std::move(model), selection};
}

namespace {

MeanMetrics::Head mean_head(const std::vector<FoldResult>& folds, Head h) {
  auto average = [&](std::optional<double> HeadMetrics::*member) -> std::optional<double> {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& fr : folds) {
      if (const auto& v = fr.metrics.at(h).*member) {
        sum += *v;
        ++n;
      }
    }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
  };
  MeanMetrics::Head mean;
  mean.precision = average(&HeadMetrics::precision);
  mean.recall = average(&HeadMetrics::recall);
  mean.f1 = average(&HeadMetrics::f1);
  for (const auto& fr : folds) {
    const auto& c = fr.metrics.at(h).confusion;
    mean.confusion.tp += c.tp;
    mean.confusion.fp += c.fp;
    mean.confusion.fn += c.fn;
    mean.confusion.tn += c.tn;
  }
  return mean;
}

}  // namespace

CrossValidation cross_validate(std::span<const LabeledReview> labeled, const TrainConfig& cfg,
                               const RecallTargets& targets) {
  cfg.validate();
  targets.validate();
  const auto folds = stratified_kfold(labeled, cfg.folds, cfg.rng_seed);

  std::vector<SparseVector> features;
  features.reserve(labeled.size());
  for (const auto& lr : labeled) features.push_back(featurize(lr.review.text, cfg.hash_dims));

  std::vector<std::size_t> fold_of(labeled.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t i : folds[f]) fold_of[i] = f;
  }

  CrossValidation cv;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<SparseVector> train_x;
    std::vector<LabelSet> train_y;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      if (fold_of[i] == f) continue;
      train_x.push_back(features[i]);
      train_y.push_back(labeled[i].labels);
    }

    FoldResult result;
    result.fold = f;
    result.train_size = train_x.size();
    result.test_size = folds[f].size();
    try {
      const auto model = train_features(train_x, train_y, cfg);
      result.selection = select_thresholds(cross_fitted_scores(train_x, train_y, cfg), targets);

      std::vector<ScoredLabel> test_scored;
      for (std::size_t i : folds[f]) {
        test_scored.push_back({model.predict_features(features[i]), labeled[i].labels});
      }
      result.metrics = evaluate(test_scored, result.selection.thresholds);
    } catch (const TrainingError& e) {
      throw TrainingError(fmt::format("fold {}: {}", f, e.what()));
    } catch (const DomainError& e) {
      throw TrainingError(fmt::format("fold {}: {}", f, e.what()));
    }
    cv.folds.push_back(std::move(result));
  }

  cv.mean.menacing = mean_head(cv.folds, Head::Menacing);
  cv.mean.profiling = mean_head(cv.folds, Head::Profiling);

  return cv;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json confusion_json(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

}  // namespace

nlohmann::json to_json(const HeadMetrics& m) {
  return {{"precision", opt(m.precision)},
          {"recall", opt(m.recall)},
          {"f1", opt(m.f1)},
          {"confusion", confusion_json(m.confusion)}};
}

nlohmann::json to_json(const Metrics& m) {
  return {{"menacing", to_json(m.menacing)}, {"profiling", to_json(m.profiling)}};
}

nlohmann::json to_json(const Thresholds& t) {
  return {{"menacing", t.t_menacing},
          {"profiling", t.t_profiling},
          {"recall_target_menacing", t.recall_target_menacing},
          {"recall_target_profiling", t.recall_target_profiling}};
}

nlohmann::json to_json(const CrossValidation& cv) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : cv.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_size", f.train_size},
                     {"test_size", f.test_size},
                     {"thresholds", to_json(f.selection.thresholds)},
                     {"metrics", to_json(f.metrics)}});
  }
  nlohmann::json mean;
  for (Head h : kHeads) {
    const auto& m = cv.mean.at(h);
    mean[std::string(to_string(h))] = {{"precision", opt(m.precision)},
                                       {"recall", opt(m.recall)},
                                       {"f1", opt(m.f1)},
                                       {"confusion", confusion_json(m.confusion)}};
  }
  return {{"folds", std::move(folds)}, {"mean", std::move(mean)}};
}

}  // namespace harass
