// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/corpus.hpp"
#include "harass/labels.hpp"

namespace harass {

enum class Gender { Male, Female, Unknown };

std::string_view to_string(Gender g);

struct GenderEvidence {
  std::string term;
  std::size_t token_offset = 0;
  Gender gender = Gender::Unknown;

  bool operator==(const GenderEvidence&) const = default;
};

struct GenderTag {
  Gender gender = Gender::Unknown;
  std::vector<GenderEvidence> evidence;
};

struct GenderTerms {
  std::set<std::string> male;
  std::set<std::string> female;

  /// `[Male]` and `[Female]` sections, one lowercase word per line. A word
  /// in both sections is rejected.
  static GenderTerms parse(std::istream& in);
  static GenderTerms load(const std::filesystem::path& path);
};

const GenderTerms& default_gender_terms();

/// Words within this many tokens after "i m", "im", "i am", "as a" or
/// "as an" describe the writer and are skipped. The window ends at the
/// sentence boundary.
inline constexpr std::size_t kSelfReferenceWindow = 3;

/// One gender across all remaining evidence → that gender. None or mixed →
/// Unknown; mixed evidence is still returned.
GenderTag extract_abuser_gender(std::string_view text,
                                const GenderTerms& terms = default_gender_terms());

struct GenderSplit {
  std::optional<double> male;
  std::optional<double> female;
  std::size_t tagged = 0;
  std::size_t total = 0;
  double coverage = 0.0;
};

struct GenderDistribution {
  /// Per head: Male/Female shares over tagged reviews of that head.
  GenderSplit menacing;
  GenderSplit profiling;
  /// Per gender: how that gender's head assignments split between the two
  /// heads. A review flagged both counts once on each side.
  std::optional<double> male_menacing;
  std::optional<double> male_profiling;
  std::optional<double> female_menacing;
  std::optional<double> female_profiling;
};

GenderDistribution gender_distribution(std::span<const std::pair<GenderTag, LabelSet>> tagged);
GenderDistribution gender_distribution(std::span<const std::pair<Gender, LabelSet>> tagged);

/// Tags every flagged review and aggregates.
GenderDistribution gender_report(std::span<const std::pair<Review, LabelSet>> decisions,
                                 const GenderTerms& terms = default_gender_terms());

nlohmann::json to_json(const GenderDistribution& d);
nlohmann::json to_json(const GenderTag& t);

}  // namespace harass
