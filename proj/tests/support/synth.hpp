// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

// Planted-signal corpora for training tests. Each positive head gets one
// keyword from its own list; everything else is neutral filler.

#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "harass/corpus.hpp"
#include "harass/emotion.hpp"
#include "harass/gender.hpp"
#include "harass/labels.hpp"
#include "harass/lexicon.hpp"
#include "harass/report.hpp"
#include "harass/rng.hpp"

namespace synth {

inline const std::vector<std::string>& filler() {
  static const std::vector<std::string> w = {
      "app", "update", "login", "crash", "battery", "slow", "messages", "profile", "match",
      "chat", "screen", "account", "photos", "swipe", "premium", "subscription", "refund",
      "support", "notifications", "bug", "feature", "design", "users", "people", "time", "money",
      "week", "day", "phone", "version", "video", "call", "friends", "group", "settings",
      "button", "page", "ads", "annoying", "terrible", "bad", "worst", "awful", "broken",
      "useless", "laggy", "glitch", "freeze", "waste", "deleted", "banned", "reported", "blocked",
      "verified", "payment", "charged", "cancel", "email", "password", "reset", "loading",
      "error", "server", "connect", "network", "sound", "camera", "filter", "stickers", "story",
      "feed", "post", "comment", "likes", "followers", "random", "weird", "okay", "fine",
      "decent", "nice", "good", "love", "hate", "boring", "fun", "stupid", "pointless",
      "confusing", "hard", "easy", "simple", "new", "old", "never", "always", "sometimes",
      "again", "still", "really", "just", "even", "also"};
  return w;
}

inline const std::vector<std::string> kMenacingWords = {
    "nudes", "explicit", "perverts", "harassing", "vulgar", "unsolicited", "rape", "bully"};
inline const std::vector<std::string> kProfilingWords = {
    "stalker", "scammer", "blackmail", "doxxed", "catfish", "tracked", "extortion", "predator"};

inline harass::LabelSet joint(int cls) { return {cls == 1 || cls == 3, cls == 2 || cls == 3}; }

/// `n` reviews with uniformly drawn joint classes. With probability `noise`
/// the observed label is swapped for a different joint class.
inline std::vector<harass::LabeledReview> planted(std::size_t n, double noise, std::uint64_t seed,
                                                  const std::string& app_id = "app-1") {
  harass::Rng rng(seed);
  std::vector<harass::LabeledReview> out;
  const auto& f = filler();
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(rng.below(4));
    const auto truth = joint(cls);
    const auto len = 8 + rng.below(18);
    std::vector<std::string> toks;
    for (std::size_t k = 0; k < len; ++k) toks.push_back(f[rng.below(f.size())]);
    auto plant = [&](const std::vector<std::string>& kw) {
      const auto pos = rng.below(toks.size() + 1);
      toks.insert(toks.begin() + static_cast<std::ptrdiff_t>(pos), kw[rng.below(kw.size())]);
    };
    if (truth.menacing) plant(kMenacingWords);
    if (truth.profiling) plant(kProfilingWords);
    std::string text;
    for (const auto& t : toks) text += (text.empty() ? "" : " ") + t;
    auto label = truth;
    if (rng.uniform() < noise) label = joint((cls + 1 + static_cast<int>(rng.below(3))) % 4);
    harass::LabeledReview lr;
    lr.review.review_id = fmt::format("r{:05d}", i);
    lr.review.app_id = app_id;
    lr.review.rating = 1 + static_cast<int>(rng.below(3));
    lr.review.text = std::move(text);
    lr.labels = label;
    out.push_back(std::move(lr));
  }
  return out;
}

/// Splits n into integer counts proportional to `weights` (largest
/// remainder, ties to the earlier index).
inline std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t n) {
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] / total * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(exact);
    used += counts[i];
    rem.emplace_back(-(exact - static_cast<double>(counts[i])), i);
  }
  std::sort(rem.begin(), rem.end());
  for (std::size_t k = 0; used < n; ++k, ++used) ++counts[rem[k].second];
  return counts;
}

/// Emotion-free, gender-free clauses.
inline const std::vector<std::string>& plain_clauses() {
  static const std::vector<std::string> c = {
      "the app keeps sending messages", "my account was reported", "this profile asked for photos",
      "the match wanted my number", "they kept asking for money", "the chat would not stop"};
  return c;
}

/// A review sentence whose only emotion-lexicon hit is for `e` (none for Base).
inline std::string emotion_text(harass::Emotion e, harass::Rng& rng) {
  static const std::map<harass::Emotion, std::vector<std::string>> words = {
      {harass::Emotion::Anger, {"furious", "angry", "pissed"}},
      {harass::Emotion::Disgust, {"disgusting", "gross", "vile"}},
      {harass::Emotion::Fear, {"terrified", "scared", "unsafe"}},
      {harass::Emotion::Joy, {"happy", "glad", "excited"}},
      {harass::Emotion::Sadness, {"sad", "upset", "lonely"}},
      {harass::Emotion::Surprise, {"shocked", "surprised", "wow"}}};
  const auto& clauses = plain_clauses();
  std::string text = clauses[rng.below(clauses.size())];
  if (const auto it = words.find(e); it != words.end()) {
    text += " and i am " + it->second[rng.below(it->second.size())];
  }
  return text;
}

/// A review sentence whose only gendered term points at `g` (none for Unknown).
inline std::string gender_text(harass::Gender g, harass::Rng& rng) {
  static const std::vector<std::string> male = {"a guy", "this man", "some dude"};
  static const std::vector<std::string> female = {"a girl", "this woman", "some lady"};
  std::string who = "someone";
  if (g == harass::Gender::Male) who = male[rng.below(male.size())];
  if (g == harass::Gender::Female) who = female[rng.below(female.size())];
  return who + " kept messaging me. " + plain_clauses()[rng.below(plain_clauses().size())];
}

/// Flagged decisions for one Table-1 style row: `both` reviews carry both
/// labels, the rest one label each. Each listed subtype gets one review that
/// names it.
inline std::vector<std::pair<harass::Review, harass::LabelSet>> decisions_for(
    const harass::TableRow& row, const std::string& app_id, std::size_t extra_unflagged = 0) {
  static const std::map<harass::Subtype, std::string> cue = {
      {harass::Subtype::Blackmail, "he tried to blackmail me"},
      {harass::Subtype::Pedophilia, "there is a pedophile here"},
      {harass::Subtype::Stalking, "a stalker followed my profile"},
      {harass::Subtype::Doxxing, "they doxxed a friend"},
      {harass::Subtype::ChildAbuse, "reported child abuse content"}};
  const auto both = static_cast<std::size_t>(row.both());
  std::vector<std::pair<harass::Review, harass::LabelSet>> out;
  auto add = [&](harass::LabelSet l, std::string text) {
    harass::Review r;
    r.review_id = fmt::format("{}-{:05d}", app_id, out.size());
    r.app_id = app_id;
    r.store = row.store;
    r.rating = 1 + static_cast<int>(out.size() % 3);
    r.text = std::move(text);
    out.emplace_back(std::move(r), l);
  };
  std::vector<std::string> cues;
  for (auto st : row.subtypes) cues.push_back(cue.at(st));
  auto text_for = [&](std::size_t i) {
    return i < cues.size() ? cues[i] : std::string("kept getting messages from fake accounts");
  };
  for (std::size_t i = 0; i < both; ++i) add({true, true}, text_for(out.size()));
  for (std::size_t i = 0; i < row.menacing - both; ++i) add({true, false}, text_for(out.size()));
  for (std::size_t i = 0; i < row.profiling - both; ++i) add({false, true}, text_for(out.size()));
  for (std::size_t i = 0; i < extra_unflagged; ++i) add({}, "the blackmail scene in the movie was fine");
  return out;
}

}  // namespace synth
