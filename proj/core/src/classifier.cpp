// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/classifier.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>

#include "harass/error.hpp"
#include "harass/rng.hpp"

namespace harass {

std::string_view to_string(JointClass c) {
  switch (c) {
    case JointClass::Neither:
      return "neither";
    case JointClass::MenacingOnly:
      return "menacing_only";
    case JointClass::ProfilingOnly:
      return "profiling_only";
    case JointClass::Both:
      return "both";
  }
  return "?";
}

void RecallTargets::validate() const {
  if (!(menacing >= 0.0 && menacing <= 1.0 && profiling >= 0.0 && profiling <= 1.0)) {
    throw DomainError("recall targets must be in [0,1]");
  }
}

void Thresholds::validate() const {
  for (double v : {t_menacing, t_profiling, recall_target_menacing, recall_target_profiling}) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("thresholds must be in [0,1]");
  }
}

void TrainConfig::validate() const {
  if (epochs < 1) throw DomainError("epochs must be >= 1");
  if (folds < 2) throw DomainError("folds must be >= 2");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw DomainError("learning_rate must be positive");
  }
  if (!(l2_penalty >= 0.0) || !std::isfinite(l2_penalty)) {
    throw DomainError("l2_penalty must be non-negative");
  }
  if (hash_dims < 2 || (hash_dims & (hash_dims - 1)) != 0) {
    throw DomainError("hash_dims must be a power of two >= 2");
  }
  if (!(positive_class_weight > 0.0)) throw DomainError("positive_class_weight must be positive");
  if (!(lr_decay_power >= 0.0)) throw DomainError("lr_decay_power must be non-negative");
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double logistic_loss(const HeadWeights& head, std::span<const LogisticExample> examples,
                     double l2) {
  double loss = 0.0;
  for (const auto& ex : examples) {
    const double z = head.margin(ex.x);
    // -[y log σ(z) + (1-y) log(1-σ(z))] = softplus(z) - y z
    loss += ex.weight * (softplus(z) - ex.y * z);
  }
  if (!examples.empty()) loss /= static_cast<double>(examples.size());
  double sq = 0.0;
  for (double w : head.weights) sq += w * w;
  return loss + 0.5 * l2 * sq;
}

void logistic_gradient(const HeadWeights& head, std::span<const LogisticExample> examples,
                       double l2, std::vector<double>& grad_w, double& grad_b) {
  grad_w.assign(head.weights.size(), 0.0);
  grad_b = 0.0;
  const double inv_n = examples.empty() ? 0.0 : 1.0 / static_cast<double>(examples.size());
  for (const auto& ex : examples) {
    const double g = ex.weight * (sigmoid(head.margin(ex.x)) - ex.y) * inv_n;
    for (std::size_t k = 0; k < ex.x.nnz(); ++k) grad_w[ex.x.indices[k]] += g * ex.x.values[k];
    grad_b += g;
  }
  for (std::size_t j = 0; j < grad_w.size(); ++j) grad_w[j] += l2 * head.weights[j];
}

LinearModel::LinearModel(std::size_t hash_dims) : hash_dims_(hash_dims) {
  if (hash_dims < 2) throw DomainError("hash_dims must be >= 2");
  for (auto& h : heads_) h.weights.assign(hash_dims, 0.0);
}

Prediction LinearModel::predict_features(const SparseVector& x) const {
  return {sigmoid(head(Head::Menacing).margin(x)), sigmoid(head(Head::Profiling).margin(x))};
}

Prediction LinearModel::predict(std::string_view text) const {
  return predict_features(featurize(text, hash_dims_));
}

std::vector<Prediction> LinearModel::predict_batch(std::span<const std::string> texts) const {
  std::vector<Prediction> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(predict(t));
  return out;
}

namespace {

// SGD with the weight vector stored as scale * v so that the L2 shrink of
// every step costs O(1) instead of O(hash_dims).
class ScaledSgd {
 public:
  ScaledSgd(std::size_t dims, double lr, double l2) : v_(dims, 0.0), lr_(lr), l2_(l2) {}

  double margin(const SparseVector& x) const { return scale_ * x.dot(v_) + bias_; }

  void step(const SparseVector& x, double y, double weight) {
    const double g = weight * (sigmoid(margin(x)) - y);
    if (l2_ > 0.0) {
      scale_ *= (1.0 - lr_ * l2_);
      if (scale_ < 1e-9) renormalize();
    }
    const double k = lr_ * g / scale_;
    for (std::size_t i = 0; i < x.nnz(); ++i) v_[x.indices[i]] -= k * x.values[i];
    bias_ -= lr_ * g;
  }

  void set_learning_rate(double lr) { lr_ = lr; }

  HeadWeights weights() const {
    HeadWeights h;
    h.weights.resize(v_.size());
    for (std::size_t j = 0; j < v_.size(); ++j) h.weights[j] = scale_ * v_[j];
    h.bias = bias_;
    return h;
  }

 private:
  void renormalize() {
    for (auto& x : v_) x *= scale_;
    scale_ = 1.0;
  }

  std::vector<double> v_;
  double scale_ = 1.0;
  double bias_ = 0.0;
  double lr_;
  double l2_;
};

}  // namespace

LinearModel train_features(std::span<const SparseVector> features,
                           std::span<const LabelSet> labels, const TrainConfig& cfg) {
  cfg.validate();
  if (features.size() != labels.size()) throw DomainError("features/labels size mismatch");
  if (features.empty()) throw TrainingError("no labeled examples");
  for (Head h : kHeads) {
    const auto positives = static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(), [h](const LabelSet& l) { return l.at(h); }));
    if (positives == 0 || positives == labels.size()) {
      throw TrainingError(fmt::format("degenerate head: {}", to_string(h)));
    }
  }

  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(cfg.rng_seed);

  std::array<ScaledSgd, 2> heads = {ScaledSgd(cfg.hash_dims, cfg.learning_rate, cfg.l2_penalty),
                                    ScaledSgd(cfg.hash_dims, cfg.learning_rate, cfg.l2_penalty)};
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    const double lr = cfg.learning_rate / std::pow(1.0 + static_cast<double>(epoch), cfg.lr_decay_power);
    for (auto& h : heads) h.set_learning_rate(lr);
    for (std::size_t i : order) {
      for (Head h : kHeads) {
        const bool y = labels[i].at(h);
        heads[static_cast<std::size_t>(h)].step(features[i], y ? 1.0 : 0.0,
                                                y ? cfg.positive_class_weight : 1.0);
      }
    }
  }

  LinearModel model(cfg.hash_dims);
  for (Head h : kHeads) model.head(h) = heads[static_cast<std::size_t>(h)].weights();
  return model;
}

LinearModel train(std::span<const LabeledReview> labeled, const TrainConfig& cfg) {
  cfg.validate();
  std::vector<SparseVector> features;
  std::vector<LabelSet> labels;
  features.reserve(labeled.size());
  labels.reserve(labeled.size());
  for (const auto& lr : labeled) {
    features.push_back(featurize(lr.review.text, cfg.hash_dims));
    labels.push_back(lr.labels);
  }
  return train_features(features, labels, cfg);
}

nlohmann::json LinearModel::to_json() const {
  nlohmann::json j;
  j["format"] = "harass-linear";
  j["version"] = kFormatVersion;
  j["hash_dims"] = hash_dims_;
  for (Head h : kHeads) {
    const auto& hw = head(h);
    nlohmann::json w = nlohmann::json::array();
    for (std::size_t i = 0; i < hw.weights.size(); ++i) {
      if (hw.weights[i] != 0.0) w.push_back({i, hw.weights[i]});
    }
    j["heads"][std::string(to_string(h))] = {{"bias", hw.bias}, {"weights", std::move(w)}};
  }
  if (thresholds) {
    j["thresholds"] = {{"menacing", thresholds->t_menacing},
                       {"profiling", thresholds->t_profiling},
                       {"recall_target_menacing", thresholds->recall_target_menacing},
                       {"recall_target_profiling", thresholds->recall_target_profiling}};
  }
  return j;
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "harass-linear") {
      throw DomainError("not a harass-linear model file");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw DomainError(fmt::format("unsupported model version {}", j.at("version").dump()));
    }
    LinearModel m(j.at("hash_dims").get<std::size_t>());
    for (Head h : kHeads) {
      const auto& hj = j.at("heads").at(std::string(to_string(h)));
      auto& hw = m.head(h);
      hw.bias = hj.at("bias").get<double>();
      for (const auto& pair : hj.at("weights")) {
        const auto idx = pair.at(0).get<std::size_t>();
        if (idx >= m.hash_dims_) throw DomainError("weight index out of range");
        hw.weights[idx] = pair.at(1).get<double>();
      }
    }
    if (auto it = j.find("thresholds"); it != j.end()) {
      Thresholds t;
      t.t_menacing = it->at("menacing").get<double>();
      t.t_profiling = it->at("profiling").get<double>();
      t.recall_target_menacing = it->value("recall_target_menacing", 0.90);
      t.recall_target_profiling = it->value("recall_target_profiling", 0.85);
      t.validate();
      m.thresholds = t;
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("malformed model: {}", e.what()));
  }
}

void LinearModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model " + path.string());
  out << to_json().dump() << '\n';
  if (!out) throw IoError("write failed for model " + path.string());
}

LinearModel LinearModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("model {} is not JSON: {}", path.string(), e.what()));
  }
  return from_json(j);
}

}  // namespace harass
