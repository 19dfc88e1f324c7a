// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/emotion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {

namespace {

constexpr std::array<std::string_view, 7> kNames = {"anger", "disgust", "fear",    "joy",
                                                    "base",  "sadness", "surprise"};

// Keep in sync with data/lexicons/emotions.txt.
constexpr std::string_view kDefaultEmotions = R"(# Emotion word lists for the built-in scorer.
[Anger]
angry
anger
furious
mad
rage
hate
hated
pissed
annoyed
outraged
livid
infuriating

[Disgust]
disgusted
disgusting
gross
creepy
creep
creeps
sick
sickening
nasty
vile
revolting
perverted
pervert
perverts

[Fear]
afraid
scared
scary
fear
terrified
frightened
unsafe
threatened
nervous
worried
panic

[Joy]
happy
love
great
fun
glad
enjoy
awesome
excited
wonderful

[Base]

[Sadness]
sad
upset
depressed
hurt
cry
crying
lonely
miserable
heartbroken

[Surprise]
shocked
surprised
unbelievable
wow
shocking
unexpected
astonished
)";

}  // namespace

std::string_view to_string(Emotion e) { return kNames[static_cast<std::size_t>(e)]; }

std::optional<Emotion> parse_emotion(std::string_view s) {
  const auto lower = to_lower_ascii(trim(s));
  if (lower == "neutral") return Emotion::Base;
  for (auto e : kAllEmotions) {
    if (to_string(e) == lower) return e;
  }
  return std::nullopt;
}

Emotion EmotionScores::dominant() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return kAllEmotions[best];
}

EmotionLexicon::EmotionLexicon(std::map<Emotion, KeywordLexicon> lists) : lists_(std::move(lists)) {}

EmotionLexicon EmotionLexicon::parse(std::istream& in) {
  std::map<Emotion, std::vector<std::string>> words;
  std::optional<Emotion> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = std::string(trim(line.substr(0, line.find('#'))));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw SchemaError(fmt::format("emotion lexicon line {}: bad header", lineno));
      current = parse_emotion(std::string_view(body).substr(1, body.size() - 2));
      if (!current) throw SchemaError(fmt::format("emotion lexicon line {}: unknown emotion {}", lineno, body));
      words[*current];
      continue;
    }
    if (!current) throw SchemaError(fmt::format("emotion lexicon line {}: entry before any header", lineno));
    words[*current].push_back(to_lower_ascii(body));
  }
  std::map<Emotion, KeywordLexicon> lists;
  for (auto& [e, w] : words) {
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    lists.emplace(e, KeywordLexicon(std::string(to_string(e)), std::move(w)));
  }
  return EmotionLexicon(std::move(lists));
}

EmotionLexicon EmotionLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open emotion lexicon " + path.string());
  return parse(in);
}

const KeywordLexicon* EmotionLexicon::find(Emotion e) const {
  const auto it = lists_.find(e);
  return it == lists_.end() ? nullptr : &it->second;
}

const EmotionLexicon& default_emotion_lexicon() {
  static const EmotionLexicon lex = [] {
    std::istringstream in{std::string(kDefaultEmotions)};
    return EmotionLexicon::parse(in);
  }();
  return lex;
}

EmotionScores LexiconEmotionBackend::score(std::string_view text) const {
  const auto tokens = tokenize(text);
  EmotionScores s;
  double emotional = 0.0;
  for (auto e : kAllEmotions) {
    const auto* lex = lex_.find(e);
    const auto hits = lex ? static_cast<double>(lex->count_hits(tokens)) : 0.0;
    s.scores[static_cast<std::size_t>(e)] = hits;
    if (e != Emotion::Base) emotional += hits;
  }
  if (emotional == 0.0) s.scores[static_cast<std::size_t>(Emotion::Base)] += 1.0;
  double total = 0.0;
  for (double v : s.scores) total += v;
  for (double& v : s.scores) v /= total;
  return s;
}

std::vector<EmotionScores> LexiconEmotionBackend::classify_batch(
    std::span<const std::string> texts) const {
  std::vector<EmotionScores> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(score(t));
  return out;
}

std::vector<EmotionScores> RemoteEmotionBackend::classify_batch(
    std::span<const std::string> texts) const {
  std::vector<EmotionScores> out;
  out.reserve(texts.size());
  const std::size_t step = std::max<std::size_t>(1, endpoint_.max_batch);
  for (std::size_t begin = 0; begin < texts.size(); begin += step) {
    const auto chunk = texts.subspan(begin, std::min(step, texts.size() - begin));
    const auto resp = post_json(endpoint_, {{"texts", chunk}});
    if (!resp.contains("emotions") || !resp["emotions"].is_array() ||
        resp["emotions"].size() != chunk.size()) {
      throw SchemaError("emotion service: expected one 'emotions' entry per text");
    }
    for (const auto& item : resp["emotions"]) {
      if (!item.is_object()) throw SchemaError("emotion service: entry is not an object");
      EmotionScores s;
      std::array<bool, 7> seen{};
      for (const auto& [key, value] : item.items()) {
        const auto e = parse_emotion(key);
        if (!e) throw SchemaError("emotion service: unknown label " + key);
        if (!value.is_number() || value.get<double>() < 0.0 || !std::isfinite(value.get<double>())) {
          throw SchemaError("emotion service: bad score for " + key);
        }
        const auto i = static_cast<std::size_t>(*e);
        if (seen[i]) throw SchemaError("emotion service: duplicate label " + key);
        seen[i] = true;
        s.scores[i] = value.get<double>();
      }
      for (auto e : kAllEmotions) {
        if (!seen[static_cast<std::size_t>(e)]) {
          throw SchemaError(fmt::format("emotion service: missing {}", to_string(e)));
        }
      }
      out.push_back(s);
    }
  }
  return out;
}

EmotionScores classify_emotion(std::string_view text, const EmotionBackend& backend) {
  const std::string t(text);
  auto out = backend.classify_batch(std::span<const std::string>(&t, 1));
  if (out.size() != 1) throw SchemaError("emotion backend returned the wrong number of results");
  return out.front();
}

std::map<std::string, EmotionProportions> emotion_distribution(
    std::span<const std::pair<Emotion, std::string>> items) {
  std::map<std::string, std::array<std::size_t, 7>> counts;
  for (const auto& [e, key] : items) ++counts[key][static_cast<std::size_t>(e)];
  std::map<std::string, EmotionProportions> out;
  for (const auto& [key, c] : counts) {
    std::size_t n = 0;
    for (auto v : c) n += v;
    EmotionProportions p{};
    for (std::size_t i = 0; i < c.size(); ++i) {
      p[i] = static_cast<double>(c[i]) / static_cast<double>(n);
    }
    out.emplace(key, p);
  }
  return out;
}

std::map<std::string, EmotionProportions> emotion_distribution(
    std::span<const std::pair<EmotionScores, std::string>> items) {
  std::vector<std::pair<Emotion, std::string>> dominant;
  dominant.reserve(items.size());
  for (const auto& [s, key] : items) dominant.emplace_back(s.dominant(), key);
  return emotion_distribution(std::span<const std::pair<Emotion, std::string>>(dominant));
}

std::vector<std::string> harassment_groups(const LabelSet& labels) {
  std::vector<std::string> g;
  if (labels.menacing) g.emplace_back("menacing");
  if (labels.profiling) g.emplace_back("profiling");
  return g;
}

nlohmann::json to_json(const std::map<std::string, EmotionProportions>& dist) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, p] : dist) {
    nlohmann::json row = nlohmann::json::object();
    for (auto e : kAllEmotions) row[std::string(to_string(e))] = p[static_cast<std::size_t>(e)];
    j[key] = row;
  }
  return j;
}

EmotionReport emotion_report(std::span<const std::pair<Review, LabelSet>> decisions,
                             const EmotionBackend& backend) {
  std::vector<std::string> texts;
  std::vector<const std::pair<Review, LabelSet>*> flagged;
  for (const auto& d : decisions) {
    if (!d.second.any()) continue;
    flagged.push_back(&d);
    texts.push_back(d.first.text);
  }
  const auto scores = backend.classify_batch(texts);
  if (scores.size() != texts.size()) throw SchemaError("emotion backend returned the wrong count");
  std::vector<std::pair<Emotion, std::string>> heads;
  std::vector<std::pair<Emotion, std::string>> polarity;
  for (std::size_t i = 0; i < flagged.size(); ++i) {
    const auto e = scores[i].dominant();
    for (auto& g : harassment_groups(flagged[i]->second)) heads.emplace_back(e, std::move(g));
    polarity.emplace_back(e, std::string(to_string(polarity_of(flagged[i]->first.rating))));
  }
  return {emotion_distribution(std::span<const std::pair<Emotion, std::string>>(heads)),
          emotion_distribution(std::span<const std::pair<Emotion, std::string>>(polarity))};
}

nlohmann::json to_json(const EmotionReport& r) {
  return {{"by_head", to_json(r.by_head)}, {"by_polarity", to_json(r.by_polarity)}};
}

}  // namespace harass
