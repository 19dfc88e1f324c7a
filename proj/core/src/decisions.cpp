// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/decisions.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>

#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {

DecisionRecord make_decision(const Review& review, const Prediction& p, const Thresholds& t) {
  return {review.review_id, review.app_id, review.store, p, t.decide(p)};
}

nlohmann::json to_json(const DecisionRecord& d) {
  nlohmann::json j;
  j["review_id"] = d.review_id;
  j["app_id"] = d.app_id;
  j["store"] = to_string(d.store);
  j["p_menacing"] = d.prediction.p_menacing;
  j["p_profiling"] = d.prediction.p_profiling;
  j["menacing"] = d.labels.menacing;
  j["profiling"] = d.labels.profiling;
  return j;
}

DecisionRecord decision_from_json(const nlohmann::json& j) {
  try {
    DecisionRecord d;
    d.review_id = j.at("review_id").get<std::string>();
    d.app_id = j.at("app_id").get<std::string>();
    const auto store = parse_store(j.at("store").get<std::string>());
    if (!store) throw SchemaError("decision record: unknown store");
    d.store = *store;
    d.prediction = {j.at("p_menacing").get<double>(), j.at("p_profiling").get<double>()};
    if (!d.prediction.valid()) throw SchemaError("decision record: probability outside [0,1]");
    d.labels = {j.at("menacing").get<bool>(), j.at("profiling").get<bool>()};
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("decision record: ") + e.what());
  }
}

void write_decisions(std::ostream& out, std::span<const DecisionRecord> decisions) {
  for (const auto& d : decisions) out << to_json(d).dump() << '\n';
  if (!out) throw IoError("writing decisions failed");
}

std::vector<DecisionRecord> read_decisions(std::istream& in) {
  std::vector<DecisionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      out.push_back(decision_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(fmt::format("decisions line {}: {}", lineno, e.what()));
    } catch (const SchemaError& e) {
      throw SchemaError(fmt::format("decisions line {}: {}", lineno, e.what()));
    }
  }
  return out;
}

std::vector<DecisionRecord> read_decisions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open decisions " + path.string());
  return read_decisions(in);
}

std::vector<DecisionRecord> classify_reviews(std::span<const Review> reviews, const Scorer& scorer,
                                             const Thresholds& t, std::size_t batch) {
  std::vector<DecisionRecord> out;
  out.reserve(reviews.size());
  batch = std::max<std::size_t>(1, batch);
  std::vector<std::string> texts;
  for (std::size_t begin = 0; begin < reviews.size(); begin += batch) {
    const auto end = std::min(reviews.size(), begin + batch);
    texts.clear();
    for (auto i = begin; i < end; ++i) texts.push_back(reviews[i].text);
    const auto preds = scorer.predict_batch(texts);
    if (preds.size() != texts.size()) throw SchemaError("scorer returned the wrong number of predictions");
    for (auto i = begin; i < end; ++i) out.push_back(make_decision(reviews[i], preds[i - begin], t));
  }
  return out;
}

std::vector<LabeledReview> read_labeled_reviews(std::istream& in) {
  std::vector<LabeledReview> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto review = review_from_json(j);
      validate(review);
      out.push_back({std::move(review),
                     {j.at("menacing").get<bool>(), j.at("profiling").get<bool>()}});
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(fmt::format("labeled reviews line {}: {}", lineno, e.what()));
    } catch (const DomainError& e) {
      throw SchemaError(fmt::format("labeled reviews line {}: {}", lineno, e.what()));
    }
  }
  return out;
}

std::vector<LabeledReview> read_labeled_reviews(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open labeled reviews " + path.string());
  return read_labeled_reviews(in);
}

void write_labeled_reviews(std::ostream& out, std::span<const LabeledReview> labeled) {
  for (const auto& l : labeled) {
    auto j = review_to_json(l.review);
    j["menacing"] = l.labels.menacing;
    j["profiling"] = l.labels.profiling;
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("writing labeled reviews failed");
}

std::vector<std::pair<Review, LabelSet>> join_decisions(std::span<const DecisionRecord> decisions,
                                                        const Corpus& corpus) {
  std::vector<std::pair<Review, LabelSet>> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) {
    const auto* r = corpus.find(d.key());
    if (!r) throw NotFoundError("decision refers to unknown review " + to_string(d.key()));
    out.emplace_back(*r, d.labels);
  }
  return out;
}

}  // namespace harass
