// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/emotion.hpp"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "harass/error.hpp"
#include "mock_server.hpp"
#include "synth.hpp"

using harass::Emotion;

namespace {

const harass::LexiconEmotionBackend& builtin() {
  static const harass::LexiconEmotionBackend b;
  return b;
}

double sum(const harass::EmotionProportions& p) {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

harass::Review rated(const std::string& id, const std::string& text, int rating) {
  harass::Review r;
  r.review_id = id;
  r.app_id = "app";
  r.text = text;
  r.rating = rating;
  return r;
}

}  // namespace

TEST(Emotion, Names) {
  EXPECT_EQ(harass::kAllEmotions.size(), 7u);
  for (auto e : harass::kAllEmotions) EXPECT_EQ(harass::parse_emotion(harass::to_string(e)), e);
  EXPECT_EQ(harass::parse_emotion("Neutral"), Emotion::Base);
  EXPECT_EQ(harass::parse_emotion("ANGER"), Emotion::Anger);
  EXPECT_FALSE(harass::parse_emotion("love").has_value());
}

TEST(Emotion, EmptyTextIsBase) {
  const auto s = harass::classify_emotion("", builtin());
  EXPECT_EQ(s.dominant(), Emotion::Base);
  EXPECT_DOUBLE_EQ(s.at(Emotion::Base), 1.0);
}

TEST(Emotion, DisgustedByCreeps) {
  const auto s = harass::classify_emotion("I am disgusted by these creeps", builtin());
  EXPECT_EQ(s.dominant(), Emotion::Disgust);
  EXPECT_DOUBLE_EQ(s.at(Emotion::Disgust), 1.0);
}

TEST(Emotion, CountsHits) {
  const auto s = harass::classify_emotion("so angry and furious, honestly scared", builtin());
  EXPECT_EQ(s.dominant(), Emotion::Anger);
  EXPECT_NEAR(s.at(Emotion::Anger), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(s.at(Emotion::Fear), 1.0 / 3.0, 1e-12);
}

TEST(Emotion, SingleWeakHitBeatsBase) {
  EXPECT_EQ(harass::classify_emotion("wow", builtin()).dominant(), Emotion::Surprise);
  EXPECT_EQ(harass::classify_emotion("so sad", builtin()).dominant(), Emotion::Sadness);
}

TEST(Emotion, TiesGoToEarlierLabel) {
  harass::EmotionScores s;
  s.scores[static_cast<std::size_t>(Emotion::Sadness)] = 0.5;
  s.scores[static_cast<std::size_t>(Emotion::Fear)] = 0.5;
  EXPECT_EQ(s.dominant(), Emotion::Fear);
}

TEST(Emotion, BuiltinScoresSumToOneAndAreDeterministic) {
  harass::Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto text = synth::emotion_text(harass::kAllEmotions[rng.below(7)], rng) + " " +
                      synth::emotion_text(harass::kAllEmotions[rng.below(7)], rng);
    const auto a = builtin().score(text);
    double total = 0.0;
    for (double v : a.scores) total += v;
    EXPECT_NEAR(total, 1.0, 1e-6);
    EXPECT_EQ(a.scores, builtin().score(text).scores);
  }
}

TEST(EmotionLexicon, ParseAndLoad) {
  std::istringstream in("[Anger]\nraging\n[Neutral]\nmeh\n");
  const harass::LexiconEmotionBackend b(harass::EmotionLexicon::parse(in));
  EXPECT_EQ(b.score("raging").dominant(), Emotion::Anger);
  EXPECT_EQ(b.score("meh").dominant(), Emotion::Base);
  std::istringstream bad("[Hunger]\nfood\n");
  EXPECT_THROW(harass::EmotionLexicon::parse(bad), harass::SchemaError);
  const auto file = harass::EmotionLexicon::load(HARASS_DATA_DIR "/lexicons/emotions.txt");
  for (auto e : harass::kAllEmotions) {
    const auto* from_file = file.find(e);
    const auto* builtin_list = harass::default_emotion_lexicon().find(e);
    ASSERT_EQ(from_file == nullptr, builtin_list == nullptr);
    if (from_file) {
      EXPECT_EQ(from_file->entries(), builtin_list->entries());
    }
  }
}

TEST(EmotionDistribution, Examples) {
  std::vector<std::pair<Emotion, std::string>> joy(4, {Emotion::Joy, "g"});
  const auto all_joy = harass::emotion_distribution(joy);
  EXPECT_DOUBLE_EQ(all_joy.at("g")[static_cast<std::size_t>(Emotion::Joy)], 1.0);
  EXPECT_DOUBLE_EQ(sum(all_joy.at("g")), 1.0);

  std::vector<std::pair<Emotion, std::string>> mixed = {
      {Emotion::Anger, "g"}, {Emotion::Joy, "g"}, {Emotion::Anger, "g"}, {Emotion::Joy, "g"}};
  const auto half = harass::emotion_distribution(mixed).at("g");
  EXPECT_DOUBLE_EQ(half[static_cast<std::size_t>(Emotion::Anger)], 0.5);
  EXPECT_DOUBLE_EQ(half[static_cast<std::size_t>(Emotion::Joy)], 0.5);
}

TEST(EmotionDistribution, GroupsSumToOne) {
  harass::Rng rng(8);
  std::vector<std::pair<Emotion, std::string>> items;
  for (int i = 0; i < 997; ++i) {
    items.emplace_back(harass::kAllEmotions[rng.below(7)], fmt::format("g{}", rng.below(13)));
  }
  for (const auto& [key, p] : harass::emotion_distribution(items)) EXPECT_NEAR(sum(p), 1.0, 1e-9) << key;
}

TEST(EmotionDistribution, DependsOnlyOnDominantLabel) {
  // Two different score vectors with the same argmax aggregate identically.
  harass::EmotionScores sharp;
  sharp.scores[static_cast<std::size_t>(Emotion::Fear)] = 1.0;
  harass::EmotionScores soft;
  soft.scores.fill(0.1);
  soft.scores[static_cast<std::size_t>(Emotion::Fear)] = 0.4;
  std::vector<std::pair<harass::EmotionScores, std::string>> a = {{sharp, "x"}, {sharp, "x"}};
  std::vector<std::pair<harass::EmotionScores, std::string>> b = {{soft, "x"}, {sharp, "x"}};
  EXPECT_EQ(harass::emotion_distribution(a), harass::emotion_distribution(b));
}

TEST(EmotionDistribution, RecoversPlantedMenacingProfile) {
  // Radar values for menacing reviews, rescaled to a dominant-label distribution.
  const std::vector<double> planted = {0.452, 0.526, 0.196, 0.078, 0.416, 0.228, 0.102};
  constexpr std::size_t n = 1000;
  const auto counts = synth::apportion(planted, n);
  harass::Rng rng(12);
  std::vector<std::pair<harass::Review, harass::LabelSet>> decisions;
  for (std::size_t e = 0; e < 7; ++e) {
    for (std::size_t i = 0; i < counts[e]; ++i) {
      decisions.emplace_back(
          rated(fmt::format("{}-{}", e, i), synth::emotion_text(harass::kAllEmotions[e], rng), 1),
          harass::LabelSet{true, false});
    }
  }
  decisions.emplace_back(rated("ignored", "i am furious", 1), harass::LabelSet{});
  const auto report = harass::emotion_report(decisions, builtin());
  ASSERT_EQ(report.by_head.count("menacing"), 1u);
  EXPECT_EQ(report.by_head.count("profiling"), 0u);
  const auto& got = report.by_head.at("menacing");
  double planted_total = 0.0;
  for (double v : planted) planted_total += v;
  for (std::size_t e = 0; e < 7; ++e) {
    EXPECT_DOUBLE_EQ(got[e], static_cast<double>(counts[e]) / n);
    EXPECT_NEAR(got[e], planted[e] / planted_total, 1.0 / n);
  }
  EXPECT_NEAR(sum(report.by_polarity.at("negative")), 1.0, 1e-9);
}

TEST(EmotionReport, PolarityAndBothHeads) {
  std::vector<std::pair<harass::Review, harass::LabelSet>> d = {
      {rated("1", "i am furious", 1), {true, true}},
      {rated("2", "so happy", 3), {false, true}},
      {rated("3", "nothing", 2), {true, false}}};
  const auto r = harass::emotion_report(d, builtin());
  EXPECT_DOUBLE_EQ(r.by_head.at("menacing")[static_cast<std::size_t>(Emotion::Anger)], 0.5);
  EXPECT_DOUBLE_EQ(r.by_head.at("profiling")[static_cast<std::size_t>(Emotion::Joy)], 0.5);
  EXPECT_DOUBLE_EQ(r.by_polarity.at("neutral")[static_cast<std::size_t>(Emotion::Joy)], 1.0);
  EXPECT_DOUBLE_EQ(r.by_polarity.at("negative")[static_cast<std::size_t>(Emotion::Base)], 0.5);
  const auto j = harass::to_json(r);
  EXPECT_DOUBLE_EQ(j.at("by_head").at("menacing").at("anger").get<double>(), 0.5);
}

TEST(RemoteEmotion, ParsesSevenScores) {
  testing_support::MockServer server("/emotion", [](const httplib::Request& req, httplib::Response& res) {
    const auto texts = nlohmann::json::parse(req.body).at("texts");
    nlohmann::json out = nlohmann::json::array();
    for (const auto& t : texts) {
      nlohmann::json row = {{"anger", 0.0}, {"disgust", 0.0}, {"fear", 0.0}, {"joy", 0.0},
                            {"neutral", 0.0}, {"sadness", 0.0}, {"surprise", 0.0}};
      row[t.get<std::string>()] = 0.9;
      out.push_back(row);
    }
    res.set_content(nlohmann::json{{"emotions", out}}.dump(), "application/json");
  });
  harass::Endpoint ep;
  ep.host = "127.0.0.1";
  ep.port = server.port();
  ep.path = "/emotion";
  ep.max_batch = 2;
  const harass::RemoteEmotionBackend remote(ep);
  const std::vector<std::string> texts = {"fear", "neutral", "joy"};
  const auto out = remote.classify_batch(texts);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].dominant(), Emotion::Fear);
  EXPECT_EQ(out[1].dominant(), Emotion::Base);
  EXPECT_EQ(out[2].dominant(), Emotion::Joy);
  const std::vector<std::string> bogus = {"boredom"};
  EXPECT_THROW(remote.classify_batch(bogus), harass::SchemaError);
}

TEST(RemoteEmotion, MissingLabelIsSchemaError) {
  testing_support::MockServer server("/predict", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"emotions":[{"anger":1.0}]})", "application/json");
  });
  harass::Endpoint ep;
  ep.host = "127.0.0.1";
  ep.port = server.port();
  const harass::RemoteEmotionBackend remote(ep);
  EXPECT_THROW(harass::classify_emotion("x", remote), harass::SchemaError);
}
