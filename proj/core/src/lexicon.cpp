// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/lexicon.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "harass/error.hpp"
#include "harass/rng.hpp"
#include "harass/text.hpp"

namespace harass {
namespace {

// Keep in sync with data/lexicons/harassment.txt.
constexpr std::string_view kDefaultHarassment = R"(# Default harassment seed keywords (stand-in list).
stalk
stalked
stalker
stalkers
stalking
cyberstalk
cyberstalker
cyberstalking
nudes
nude
creep
creeps
creepy
pedophile
pedophiles
pedo
pedos
groomer
groomers
grooming
scam
scammer
scammers
scammed
blackmail
blackmailed
blackmailing
doxx
doxxed
doxxing
harass
harassed
harassing
harassment
rape
raped
predator
predators
fake profile
fake profiles
bot
bots
catfish
catfished
sugar daddy
)";

// Keep in sync with data/lexicons/subtypes.txt.
constexpr std::string_view kDefaultSubtypes = R"(# Critical-harassment subtype keywords.
[Blackmail]
blackmail
blackmailed
blackmailing
blackmailer
blackmailers
extort
extorted
extortion
sextortion
threatened to leak
threatened to post
threatened to share

[Pedophilia]
pedophile
pedophiles
pedophilia
paedophile
pedo
pedos
groomer
groomers
grooming minors
child predator
child predators

[Stalking]
stalk
stalks
stalked
stalker
stalkers
stalking
cyberstalk
cyberstalked
cyberstalker
cyberstalking
followed me home
tracked my location

[Doxxing]
doxx
doxxed
doxxing
dox
doxed
doxing
leaked my address
posted my address
posted my number
shared my address

[ChildAbuse]
child abuse
child abuser
child porn
child pornography
child exploitation
abusing children
abusing kids
csam
)";

std::string normalize_phrase(std::string_view raw) {
  std::string out;
  for (const auto& t : tokenize(raw)) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

}  // namespace

KeywordLexicon::KeywordLexicon(std::string name, std::vector<std::string> entries)
    : name_(std::move(name)), entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (trim(e).empty()) throw DomainError(fmt::format("lexicon '{}': empty entry", name_));
    if (e != to_lower_ascii(e)) {
      throw DomainError(fmt::format("lexicon '{}': entry '{}' is not lowercase", name_, e));
    }
    if (!seen.insert(e).second) {
      throw DomainError(fmt::format("lexicon '{}': duplicate entry '{}'", name_, e));
    }
    auto tokens = tokenize(e);
    if (tokens.empty() || tokens.size() > kMaxPhraseTokens) {
      throw DomainError(
          fmt::format("lexicon '{}': entry '{}' must have 1 to {} tokens", name_, e, kMaxPhraseTokens));
    }
    by_first_token_[tokens.front()].push_back(i);
    phrases_.push_back(std::move(tokens));
  }
}

KeywordLexicon KeywordLexicon::parse(std::string name, std::istream& in) {
  std::vector<std::string> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto phrase = normalize_phrase(line);
    if (phrase.empty()) continue;
    if (seen.insert(phrase).second) entries.push_back(std::move(phrase));
  }
  return KeywordLexicon(std::move(name), std::move(entries));
}

KeywordLexicon KeywordLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  return parse(path.stem().string(), in);
}

template <typename Fn>
void KeywordLexicon::for_each_hit(std::span<const std::string> tokens, Fn&& fn) const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto it = by_first_token_.find(tokens[i]);
    if (it == by_first_token_.end()) continue;
    for (std::size_t idx : it->second) {
      const auto& phrase = phrases_[idx];
      if (i + phrase.size() > tokens.size()) continue;
      if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
        fn(idx);
      }
    }
  }
}

std::set<std::string> KeywordLexicon::match_tokens(std::span<const std::string> tokens) const {
  std::set<std::string> hits;
  for_each_hit(tokens, [&](std::size_t idx) { hits.insert(entries_[idx]); });
  return hits;
}

std::set<std::string> KeywordLexicon::match(std::string_view text) const {
  const auto tokens = tokenize(text);
  return match_tokens(tokens);
}

std::size_t KeywordLexicon::count_hits(std::span<const std::string> tokens) const {
  std::size_t n = 0;
  for_each_hit(tokens, [&](std::size_t) { ++n; });
  return n;
}

bool KeywordLexicon::matches_any(std::string_view text) const { return !match(text).empty(); }

std::set<std::string> match_keywords(std::string_view text, const KeywordLexicon& lex) {
  return lex.match(text);
}

const KeywordLexicon& default_harassment_lexicon() {
  static const KeywordLexicon lex = [] {
    std::istringstream in{std::string(kDefaultHarassment)};
    return KeywordLexicon::parse("harassment", in);
  }();
  return lex;
}

std::string_view to_string(Subtype s) {
  switch (s) {
    case Subtype::Blackmail:
      return "blackmail";
    case Subtype::Pedophilia:
      return "pedophilia";
    case Subtype::Stalking:
      return "stalking";
    case Subtype::Doxxing:
      return "doxxing";
    case Subtype::ChildAbuse:
      return "child abuse";
  }
  return "?";
}

std::optional<Subtype> parse_subtype(std::string_view s) {
  std::string key;
  for (char c : to_lower_ascii(trim(s))) {
    if (c != ' ' && c != '_' && c != '-') key.push_back(c);
  }
  if (key == "blackmail") return Subtype::Blackmail;
  if (key == "pedophilia") return Subtype::Pedophilia;
  if (key == "stalking") return Subtype::Stalking;
  if (key == "doxxing") return Subtype::Doxxing;
  if (key == "childabuse") return Subtype::ChildAbuse;
  return std::nullopt;
}

SubtypeLexicons::SubtypeLexicons(std::map<Subtype, KeywordLexicon> lexicons)
    : lexicons_(std::move(lexicons)) {
  for (auto s : kAllSubtypes) {
    if (!lexicons_.contains(s)) {
      throw DomainError(fmt::format("subtype lexicons: missing section for '{}'", to_string(s)));
    }
  }
}

SubtypeLexicons SubtypeLexicons::parse(std::istream& in) {
  std::map<Subtype, std::stringstream> sections;
  std::optional<Subtype> current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') {
      current = parse_subtype(t.substr(1, t.size() - 2));
      if (!current) {
        throw DomainError(fmt::format("subtype lexicons line {}: unknown section {}", lineno, t));
      }
      sections[*current];
      continue;
    }
    const auto body = trim(t.substr(0, t.find('#')));
    if (body.empty()) continue;
    if (!current) {
      throw DomainError(fmt::format("subtype lexicons line {}: entry before any section", lineno));
    }
    sections[*current] << body << '\n';
  }
  std::map<Subtype, KeywordLexicon> lexicons;
  for (auto& [s, body] : sections) {
    lexicons.emplace(s, KeywordLexicon::parse(std::string(to_string(s)), body));
  }
  return SubtypeLexicons(std::move(lexicons));
}

SubtypeLexicons SubtypeLexicons::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open subtype lexicons " + path.string());
  return parse(in);
}

const SubtypeLexicons& default_subtype_lexicons() {
  static const SubtypeLexicons subs = [] {
    std::istringstream in{std::string(kDefaultSubtypes)};
    return SubtypeLexicons::parse(in);
  }();
  return subs;
}

std::set<Subtype> tag_subtypes(std::string_view text, const SubtypeLexicons& subs) {
  const auto tokens = tokenize(text);
  std::set<Subtype> tags;
  for (const auto& [s, lex] : subs.all()) {
    if (lex.count_hits(tokens) > 0) tags.insert(s);
  }
  return tags;
}

std::vector<std::string> sorted_subtype_names(const std::set<Subtype>& subtypes) {
  std::vector<std::string> names;
  for (auto s : subtypes) names.emplace_back(to_string(s));
  std::sort(names.begin(), names.end());
  return names;
}

SeedSample sample_seed_set(const Corpus& corpus, const CorpusConfig& cfg,
                           const KeywordLexicon& lex, std::size_t n, std::uint64_t rng_seed) {
  if (n == 0) throw DomainError("sample_seed_set: n must be >= 1");
  std::vector<const Review*> population;
  for (const Review* r : corpus.eligible(cfg)) {
    if (lex.matches_any(r->text)) population.push_back(r);
  }
  SeedSample out;
  out.population = population.size();
  out.empty_population = population.empty();
  const std::size_t take = std::min(n, population.size());

  // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < take; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(population.size() - i));
    std::swap(population[i], population[j]);
  }
  population.resize(take);
  out.reviews = std::move(population);
  return out;
}

}  // namespace harass
