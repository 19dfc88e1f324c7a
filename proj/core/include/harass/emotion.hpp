// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/inference_client.hpp"
#include "harass/labels.hpp"
#include "harass/lexicon.hpp"

namespace harass {

/// Order matters: argmax ties go to the earlier value.
enum class Emotion { Anger, Disgust, Fear, Joy, Base, Sadness, Surprise };

inline constexpr std::array<Emotion, 7> kAllEmotions = {
    Emotion::Anger, Emotion::Disgust, Emotion::Fear,    Emotion::Joy,
    Emotion::Base,  Emotion::Sadness, Emotion::Surprise};

std::string_view to_string(Emotion e);
/// Case-insensitive; "neutral" is read as Base.
std::optional<Emotion> parse_emotion(std::string_view s);

struct EmotionScores {
  std::array<double, 7> scores{};

  double at(Emotion e) const { return scores[static_cast<std::size_t>(e)]; }
  Emotion dominant() const;
};

class EmotionBackend {
 public:
  virtual ~EmotionBackend() = default;
  virtual std::vector<EmotionScores> classify_batch(std::span<const std::string> texts) const = 0;
};

/// Word lists per emotion. Missing sections are empty.
class EmotionLexicon {
 public:
  EmotionLexicon() = default;
  explicit EmotionLexicon(std::map<Emotion, KeywordLexicon> lists);

  /// `[Emotion]` headers (e.g. `[Anger]`) followed by one phrase per line.
  static EmotionLexicon parse(std::istream& in);
  static EmotionLexicon load(const std::filesystem::path& path);

  const KeywordLexicon* find(Emotion e) const;

 private:
  std::map<Emotion, KeywordLexicon> lists_;
};

const EmotionLexicon& default_emotion_lexicon();

/// Hit counts per emotion, normalized. Base gets the [Base] hits plus one
/// pseudo-count when nothing else hit, so empty text is Base.
class LexiconEmotionBackend final : public EmotionBackend {
 public:
  explicit LexiconEmotionBackend(const EmotionLexicon& lex = default_emotion_lexicon())
      : lex_(lex) {}
  EmotionScores score(std::string_view text) const;
  std::vector<EmotionScores> classify_batch(std::span<const std::string> texts) const override;

 private:
  EmotionLexicon lex_;
};

/// Request {"texts": [...]}; response {"emotions": [{"anger": p, ...}, ...]}
/// with all seven keys ("neutral" may stand for "base") and scores >= 0.
class RemoteEmotionBackend final : public EmotionBackend {
 public:
  explicit RemoteEmotionBackend(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}
  std::vector<EmotionScores> classify_batch(std::span<const std::string> texts) const override;

 private:
  Endpoint endpoint_;
};

EmotionScores classify_emotion(std::string_view text, const EmotionBackend& backend);

using EmotionProportions = std::array<double, 7>;

/// Per group, the share of items whose dominant emotion is each label.
std::map<std::string, EmotionProportions> emotion_distribution(
    std::span<const std::pair<EmotionScores, std::string>> items);
std::map<std::string, EmotionProportions> emotion_distribution(
    std::span<const std::pair<Emotion, std::string>> items);

/// "menacing" and/or "profiling" for the positive heads.
std::vector<std::string> harassment_groups(const LabelSet& labels);

nlohmann::json to_json(const std::map<std::string, EmotionProportions>& dist);

struct EmotionReport {
  /// Keys "menacing" and "profiling"; a review flagged both counts in both.
  std::map<std::string, EmotionProportions> by_head;
  /// Flagged reviews keyed by rating polarity ("negative", "neutral").
  std::map<std::string, EmotionProportions> by_polarity;
};

/// Scores the flagged reviews once and aggregates them both ways.
EmotionReport emotion_report(std::span<const std::pair<Review, LabelSet>> decisions,
                             const EmotionBackend& backend);

nlohmann::json to_json(const EmotionReport& r);

}  // namespace harass
