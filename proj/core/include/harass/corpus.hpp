// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/date.hpp"

namespace harass {

enum class Store { Apple, Google };

std::string_view to_string(Store s);
std::optional<Store> parse_store(std::string_view s);

enum class Polarity { Negative, Neutral, Positive };

std::string_view to_string(Polarity p);

/// 1-2 stars negative, 3 neutral, 4-5 positive. Throws DomainError outside 1..5.
Polarity polarity_of(int rating);

struct ReviewKey {
  Store store = Store::Apple;
  std::string app_id;
  std::string review_id;

  auto operator<=>(const ReviewKey&) const = default;
  bool operator==(const ReviewKey&) const = default;
};

std::string to_string(const ReviewKey& k);

struct Review {
  std::string review_id;
  std::string app_id;
  Store store = Store::Apple;
  int rating = 1;
  std::string text;
  Date posted_date = make_date(2020, 1, 1);
  /// One-way hash of the author handle; the handle itself is never kept.
  std::optional<std::string> author_hash;

  ReviewKey key() const { return {store, app_id, review_id}; }
};

/// Throws DomainError if `r` breaks a Review invariant (rating range,
/// blank text, empty ids, invalid date).
void validate(const Review& r);

enum class LanguageFilter { EnglishOnly, Off };

struct CorpusConfig {
  Date date_cutoff = make_date(2020, 1, 1);
  LanguageFilter language_filter = LanguageFilter::EnglishOnly;
  double english_stopword_hit_min = 0.12;

  void validate() const;
};

/// Pluggable language check. The built-in one is a stopword-ratio plus
/// Latin-script heuristic.
class LanguageDetector {
 public:
  virtual ~LanguageDetector() = default;
  virtual bool is_english(std::string_view text) const = 0;
};

class StopwordLanguageDetector final : public LanguageDetector {
 public:
  explicit StopwordLanguageDetector(double stopword_hit_min = 0.12);
  bool is_english(std::string_view text) const override;

  static constexpr double kMinLatinFraction = 0.8;

 private:
  double stopword_hit_min_;
};

/// True when at least `stopword_hit_min` of the tokens are English stopwords
/// and at least 80% of letters are Latin script. Empty text is not English.
bool detect_english(std::string_view text, double stopword_hit_min = 0.12);

bool is_eligible(const Review& review, const CorpusConfig& cfg, const LanguageDetector& detector);
bool is_eligible(const Review& review, const CorpusConfig& cfg);

enum class InputFormat { JsonLines, Csv };

struct IngestSummary {
  std::size_t imported = 0;
  std::size_t duplicates = 0;
  std::size_t malformed = 0;

  std::size_t total() const { return imported + duplicates + malformed; }
};

/// Parses one input record (JSON-Lines shape) into a Review. `declared` is
/// the store the batch was imported for; a record naming a different store
/// is rejected. Returns nullopt and sets `why` on any problem.
std::optional<Review> parse_review_record(const nlohmann::json& rec, Store declared,
                                          std::string* why = nullptr);

/// Persisted form: like the input record, with `author_hash` in place of
/// `author`.
nlohmann::json review_to_json(const Review& r);
Review review_from_json(const nlohmann::json& j);

/// Review collection with a unique (store, app_id, review_id) index and an
/// optional append-only JSON-Lines log that mirrors every insert.
///
/// Single writer. Concurrent readers are fine once ingestion is done.
class Corpus {
 public:
  Corpus() = default;

  /// Loads `log` if it exists and attaches it for appends. A corrupt log line
  /// throws IoError.
  static Corpus open(const std::filesystem::path& log);

  /// Imports a JSON-Lines or CSV stream. Malformed records are counted and
  /// skipped. A stream that is already in a failed state throws IoError.
  IngestSummary import_reviews(std::istream& source, InputFormat format, Store store);

  /// Adds one validated review; false if the key already exists.
  bool insert(Review review);

  const std::vector<Review>& reviews() const { return reviews_; }
  std::size_t size() const { return reviews_.size(); }
  const Review* find(const ReviewKey& key) const;

  std::vector<const Review*> eligible(const CorpusConfig& cfg) const;
  std::vector<const Review*> eligible(const CorpusConfig& cfg,
                                      const LanguageDetector& detector) const;

  const std::optional<std::filesystem::path>& log_path() const { return log_path_; }

 private:
  bool insert_indexed(Review review);
  void append_to_log(std::size_t first_new) const;

  std::vector<Review> reviews_;
  std::map<ReviewKey, std::size_t> index_;
  std::optional<std::filesystem::path> log_path_;
};

}  // namespace harass
