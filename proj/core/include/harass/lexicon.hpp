// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "harass/corpus.hpp"

namespace harass {

/// Named list of lowercase keyword phrases (1 to 3 tokens each). Matching
/// runs on the token stream, so "scam" never hits inside "scarf" and
/// "fake profile" only hits as two consecutive tokens.
class KeywordLexicon {
 public:
  KeywordLexicon() = default;
  /// Throws DomainError on empty, non-lowercase, duplicate, or over-long
  /// entries.
  KeywordLexicon(std::string name, std::vector<std::string> entries);

  /// One phrase per line; `#` starts a comment. Entries are lowercased and
  /// de-duplicated.
  static KeywordLexicon parse(std::string name, std::istream& in);
  static KeywordLexicon load(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::set<std::string> match(std::string_view text) const;
  std::set<std::string> match_tokens(std::span<const std::string> tokens) const;
  /// Total number of phrase occurrences, counting repeats.
  std::size_t count_hits(std::span<const std::string> tokens) const;
  bool matches_any(std::string_view text) const;

  static constexpr std::size_t kMaxPhraseTokens = 3;

 private:
  template <typename Fn>
  void for_each_hit(std::span<const std::string> tokens, Fn&& fn) const;

  std::string name_;
  std::vector<std::string> entries_;
  std::vector<std::vector<std::string>> phrases_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_token_;
};

std::set<std::string> match_keywords(std::string_view text, const KeywordLexicon& lex);

/// Stand-in harassment seed list built from the taxonomy vocabulary. Replace
/// it with a curated list via `KeywordLexicon::load` for real runs.
const KeywordLexicon& default_harassment_lexicon();

enum class Subtype { Blackmail, Pedophilia, Stalking, Doxxing, ChildAbuse };

inline constexpr std::array<Subtype, 5> kAllSubtypes = {
    Subtype::Blackmail, Subtype::Pedophilia, Subtype::Stalking, Subtype::Doxxing,
    Subtype::ChildAbuse};

/// Lowercase display name as used in report tables, e.g. "child abuse".
std::string_view to_string(Subtype s);
/// Accepts display names and header spellings ("ChildAbuse", "child abuse").
std::optional<Subtype> parse_subtype(std::string_view s);

/// One lexicon per critical-harassment subtype; all five must be present.
class SubtypeLexicons {
 public:
  explicit SubtypeLexicons(std::map<Subtype, KeywordLexicon> lexicons);

  /// `[Subtype]` headers followed by one phrase per line.
  static SubtypeLexicons parse(std::istream& in);
  static SubtypeLexicons load(const std::filesystem::path& path);

  const KeywordLexicon& at(Subtype s) const { return lexicons_.at(s); }
  const std::map<Subtype, KeywordLexicon>& all() const { return lexicons_; }

 private:
  std::map<Subtype, KeywordLexicon> lexicons_;
};

const SubtypeLexicons& default_subtype_lexicons();

std::set<Subtype> tag_subtypes(std::string_view text, const SubtypeLexicons& subs);

/// Subtype names sorted alphabetically, as rendered in report tables.
std::vector<std::string> sorted_subtype_names(const std::set<Subtype>& subtypes);

struct SeedSample {
  std::vector<const Review*> reviews;
  /// Eligible reviews with at least one keyword match.
  std::size_t population = 0;
  /// Set when the population is empty.
  bool empty_population = false;
};

/// Uniform sample without replacement of min(n, population) eligible,
/// keyword-matching reviews. Deterministic for a given corpus order and seed.
SeedSample sample_seed_set(const Corpus& corpus, const CorpusConfig& cfg,
                           const KeywordLexicon& lex, std::size_t n, std::uint64_t rng_seed);

}  // namespace harass
