// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/classifier.hpp"
#include "harass/corpus.hpp"

namespace harass {

/// One classified review as written by `classify`.
struct DecisionRecord {
  std::string review_id;
  std::string app_id;
  Store store = Store::Apple;
  Prediction prediction;
  LabelSet labels;

  ReviewKey key() const { return {store, app_id, review_id}; }
  bool operator==(const DecisionRecord&) const = default;
};

DecisionRecord make_decision(const Review& review, const Prediction& p, const Thresholds& t);

nlohmann::json to_json(const DecisionRecord& d);
DecisionRecord decision_from_json(const nlohmann::json& j);

void write_decisions(std::ostream& out, std::span<const DecisionRecord> decisions);
std::vector<DecisionRecord> read_decisions(std::istream& in);
std::vector<DecisionRecord> read_decisions(const std::filesystem::path& path);

/// Scores every review with `scorer` in batches and applies `t`.
std::vector<DecisionRecord> classify_reviews(std::span<const Review> reviews, const Scorer& scorer,
                                             const Thresholds& t, std::size_t batch = 512);

/// Hand-labeled reviews: one review object per line with boolean
/// "menacing" and "profiling" fields.
std::vector<LabeledReview> read_labeled_reviews(std::istream& in);
std::vector<LabeledReview> read_labeled_reviews(const std::filesystem::path& path);
void write_labeled_reviews(std::ostream& out, std::span<const LabeledReview> labeled);

/// Pairs each decision with its review text. Throws NotFoundError when a
/// decision refers to a review the corpus lacks.
std::vector<std::pair<Review, LabelSet>> join_decisions(std::span<const DecisionRecord> decisions,
                                                        const Corpus& corpus);

}  // namespace harass
