// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/features.hpp"
#include "harass/labels.hpp"

namespace harass {

struct RecallTargets {
  double menacing = 0.90;
  double profiling = 0.85;

  double at(Head h) const { return h == Head::Menacing ? menacing : profiling; }
  void validate() const;
};

/// Decision thresholds per head; a review is flagged for a head when
/// p >= t.
struct Thresholds {
  double t_menacing = 0.5;
  double t_profiling = 0.5;
  double recall_target_menacing = 0.90;
  double recall_target_profiling = 0.85;

  double at(Head h) const { return h == Head::Menacing ? t_menacing : t_profiling; }
  double& at(Head h) { return h == Head::Menacing ? t_menacing : t_profiling; }
  RecallTargets targets() const { return {recall_target_menacing, recall_target_profiling}; }
  LabelSet decide(const Prediction& p) const {
    return {p.p_menacing >= t_menacing, p.p_profiling >= t_profiling};
  }
  void validate() const;
  bool operator==(const Thresholds&) const = default;
};

struct TrainConfig {
  std::size_t epochs = 5;
  std::size_t folds = 5;
  /// Epoch e (0-based) runs at learning_rate / (1 + e)^lr_decay_power.
  double learning_rate = 3.0;
  double lr_decay_power = 2.0;
  double l2_penalty = 1e-5;
  std::size_t hash_dims = std::size_t{1} << 18;
  std::uint64_t rng_seed = 42;
  /// Multiplier on the loss of positive examples; 1 means no reweighting.
  double positive_class_weight = 1.0;

  void validate() const;
};

/// Anything that maps review texts to per-head probabilities: the built-in
/// linear model or a remote inference service.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<Prediction> predict_batch(std::span<const std::string> texts) const = 0;
};

struct HeadWeights {
  std::vector<double> weights;
  double bias = 0.0;

  double margin(const SparseVector& x) const { return x.dot(weights) + bias; }
  bool operator==(const HeadWeights&) const = default;
};

double sigmoid(double z);

/// One example for a single head's logistic loss.
struct LogisticExample {
  SparseVector x;
  double y = 0.0;       // 0 or 1
  double weight = 1.0;  // positive-class weight for y == 1
};

/// Mean weighted logistic loss plus (l2/2)·||w||². The bias is not
/// penalized.
double logistic_loss(const HeadWeights& head, std::span<const LogisticExample> examples,
                     double l2);

/// Gradient of `logistic_loss`. `grad_w` is resized to the weight dimension.
void logistic_gradient(const HeadWeights& head, std::span<const LogisticExample> examples,
                       double l2, std::vector<double>& grad_w, double& grad_b);

/// Hashed n-gram model with one independent logistic head per label.
class LinearModel final : public Scorer {
 public:
  explicit LinearModel(std::size_t hash_dims);

  Prediction predict(std::string_view text) const;
  Prediction predict_features(const SparseVector& x) const;
  std::vector<Prediction> predict_batch(std::span<const std::string> texts) const override;

  std::size_t hash_dims() const { return hash_dims_; }
  const HeadWeights& head(Head h) const { return heads_[static_cast<std::size_t>(h)]; }
  HeadWeights& head(Head h) { return heads_[static_cast<std::size_t>(h)]; }

  /// Thresholds chosen for this model, if any.
  std::optional<Thresholds> thresholds;

  static constexpr int kFormatVersion = 1;
  nlohmann::json to_json() const;
  static LinearModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static LinearModel load(const std::filesystem::path& path);

  bool operator==(const LinearModel& o) const {
    return hash_dims_ == o.hash_dims_ && heads_ == o.heads_ && thresholds == o.thresholds;
  }

 private:
  std::size_t hash_dims_;
  std::array<HeadWeights, 2> heads_;
};

/// SGD on each head for `cfg.epochs` passes with an annealed step size; the
/// example order is reshuffled every epoch from `cfg.rng_seed`. Throws TrainingError
/// ("degenerate head: menacing") when a head has only one class.
LinearModel train(std::span<const LabeledReview> labeled, const TrainConfig& cfg);

/// Same as `train` for pre-featurized inputs; `features[i]` belongs to
/// `labels[i]`.
LinearModel train_features(std::span<const SparseVector> features,
                           std::span<const LabelSet> labels, const TrainConfig& cfg);

}  // namespace harass
