// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/corpus.hpp"

#include <fmt/format.h>

#include <array>
#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "harass/csv.hpp"
#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {
namespace {

using nlohmann::json;

const std::unordered_set<std::string_view>& english_stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a",      "about",   "above",  "after",   "again", "against", "all",    "am",
      "an",     "and",     "any",    "are",     "as",    "at",      "be",     "because",
      "been",   "before",  "being",  "below",   "between", "both",  "but",    "by",
      "can",    "cannot",  "could",  "did",     "do",    "does",    "doing",  "don",
      "down",   "during",  "each",   "even",    "ever",  "every",   "few",    "for",
      "from",   "further", "get",    "got",     "had",   "has",     "have",   "having",
      "he",     "her",     "here",   "hers",    "him",   "his",     "how",    "i",
      "if",     "in",      "into",   "is",      "it",    "its",     "just",   "like",
      "me",     "more",    "most",   "my",      "no",    "nor",     "not",    "now",
      "of",     "off",     "on",     "once",    "only",  "or",      "other",  "our",
      "out",    "over",    "own",    "people",  "really", "same",   "she",    "should",
      "so",     "some",    "such",   "than",    "that",  "the",     "their",  "them",
      "then",   "there",   "these",  "they",    "this",  "those",   "through", "to",
      "too",    "under",   "until",  "up",      "very",  "was",     "we",     "were",
      "what",   "when",    "where",  "which",   "while", "who",     "whom",   "why",
      "will",   "with",    "would",  "you",     "your",  "yours",   "t",      "s",
      "m",      "ve",      "ll",     "re",      "d",     "doesn",   "didn",   "isn",
      "wasn",   "won",     "can't",  "also",    "still", "much",    "many",   "one",
      "app",    "us",      "im",     "dont",    "cant",  "let",     "make",   "want",
  };
  return words;
}

constexpr std::array<std::string_view, 5> kRequiredFields = {"review_id", "app_id", "rating",
                                                             "text", "posted_date"};

std::optional<std::string> id_field(const json& rec, const char* name) {
  const auto it = rec.find(name);
  if (it == rec.end()) return std::nullopt;
  if (it->is_string()) {
    auto s = std::string(trim(it->get_ref<const std::string&>()));
    if (s.empty()) return std::nullopt;
    return s;
  }
  if (it->is_number_integer()) return it->dump();
  return std::nullopt;
}

std::string hash_author(std::string_view handle) {
  return sha256_hex(std::string("author:") + std::string(handle));
}

}  // namespace

std::string_view to_string(Store s) { return s == Store::Apple ? "apple" : "google"; }

std::optional<Store> parse_store(std::string_view s) {
  const auto lower = to_lower_ascii(trim(s));
  if (lower == "apple") return Store::Apple;
  if (lower == "google") return Store::Google;
  return std::nullopt;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Negative:
      return "negative";
    case Polarity::Neutral:
      return "neutral";
    case Polarity::Positive:
      return "positive";
  }
  return "?";
}

Polarity polarity_of(int rating) {
  if (rating < 1 || rating > 5) throw DomainError(fmt::format("rating {} outside 1..5", rating));
  if (rating <= 2) return Polarity::Negative;
  if (rating == 3) return Polarity::Neutral;
  return Polarity::Positive;
}

std::string to_string(const ReviewKey& k) {
  return fmt::format("{}/{}/{}", to_string(k.store), k.app_id, k.review_id);
}

void validate(const Review& r) {
  if (r.review_id.empty() || r.app_id.empty()) throw DomainError("review with empty id");
  if (r.rating < 1 || r.rating > 5) {
    throw DomainError(fmt::format("review {}: rating {} outside 1..5", r.review_id, r.rating));
  }
  if (trim(r.text).empty()) throw DomainError(fmt::format("review {}: blank text", r.review_id));
  if (!r.posted_date.ok()) throw DomainError(fmt::format("review {}: invalid date", r.review_id));
}

void CorpusConfig::validate() const {
  if (!date_cutoff.ok()) throw DomainError("date_cutoff is not a valid date");
  if (!(english_stopword_hit_min >= 0.0 && english_stopword_hit_min <= 1.0)) {
    throw DomainError("english_stopword_hit_min must be in [0,1]");
  }
}

StopwordLanguageDetector::StopwordLanguageDetector(double stopword_hit_min)
    : stopword_hit_min_(stopword_hit_min) {
  if (!(stopword_hit_min >= 0.0 && stopword_hit_min <= 1.0)) {
    throw DomainError("stopword_hit_min must be in [0,1]");
  }
}

bool StopwordLanguageDetector::is_english(std::string_view text) const {
  const auto tokens = tokenize(text);
  if (tokens.empty()) return false;

  std::size_t letters = 0;
  std::size_t latin = 0;
  for (char32_t cp : decode_utf8(text)) {
    if (!is_letter_like(cp)) continue;
    ++letters;
    if (is_latin_letter(cp)) ++latin;
  }
  if (letters == 0) return false;
  if (static_cast<double>(latin) < kMinLatinFraction * static_cast<double>(letters)) return false;

  const auto& stop = english_stopwords();
  const auto hits = static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(), [&](const std::string& t) { return stop.contains(t); }));
  return static_cast<double>(hits) >= stopword_hit_min_ * static_cast<double>(tokens.size());
}

bool detect_english(std::string_view text, double stopword_hit_min) {
  return StopwordLanguageDetector(stopword_hit_min).is_english(text);
}

bool is_eligible(const Review& review, const CorpusConfig& cfg, const LanguageDetector& detector) {
  const auto polarity = polarity_of(review.rating);
  if (polarity == Polarity::Positive) return false;
  if (review.posted_date < cfg.date_cutoff) return false;
  if (cfg.language_filter == LanguageFilter::Off) return true;
  return detector.is_english(review.text);
}

bool is_eligible(const Review& review, const CorpusConfig& cfg) {
  return is_eligible(review, cfg, StopwordLanguageDetector(cfg.english_stopword_hit_min));
}

std::optional<Review> parse_review_record(const json& rec, Store declared, std::string* why) {
  auto fail = [&](std::string msg) -> std::optional<Review> {
    if (why) *why = std::move(msg);
    return std::nullopt;
  };
  if (!rec.is_object()) return fail("record is not an object");
  for (auto field : kRequiredFields) {
    if (!rec.contains(field)) return fail(fmt::format("missing field '{}'", field));
  }

  Review r;
  auto rid = id_field(rec, "review_id");
  auto aid = id_field(rec, "app_id");
  if (!rid || !aid) return fail("review_id/app_id must be non-empty");
  r.review_id = std::move(*rid);
  r.app_id = std::move(*aid);

  r.store = declared;
  if (auto it = rec.find("store"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) return fail("store must be a string");
    const auto s = parse_store(it->get_ref<const std::string&>());
    if (!s) return fail("unknown store");
    if (*s != declared) return fail("store does not match the import's store");
  }

  const auto& rating = rec.at("rating");
  if (!rating.is_number_integer()) return fail("rating must be an integer");
  const auto rv = rating.get<long long>();
  if (rv < 1 || rv > 5) return fail("rating outside 1..5");
  r.rating = static_cast<int>(rv);

  const auto& text = rec.at("text");
  if (!text.is_string()) return fail("text must be a string");
  r.text = text.get<std::string>();
  if (trim(r.text).empty()) return fail("blank text");

  const auto& date = rec.at("posted_date");
  if (!date.is_string()) return fail("posted_date must be a string");
  const auto d = parse_iso_date(date.get_ref<const std::string&>());
  if (!d) return fail("posted_date is not YYYY-MM-DD");
  r.posted_date = *d;

  if (auto it = rec.find("author"); it != rec.end() && !it->is_null()) {
    if (!it->is_string()) return fail("author must be a string");
    const auto handle = trim(it->get_ref<const std::string&>());
    if (!handle.empty()) r.author_hash = hash_author(handle);
  } else if (auto h = rec.find("author_hash"); h != rec.end() && h->is_string()) {
    r.author_hash = h->get<std::string>();
  }
  return r;
}

json review_to_json(const Review& r) {
  json j = {{"review_id", r.review_id},
            {"app_id", r.app_id},
            {"store", to_string(r.store)},
            {"rating", r.rating},
            {"text", r.text},
            {"posted_date", format_iso_date(r.posted_date)}};
  if (r.author_hash) j["author_hash"] = *r.author_hash;
  return j;
}

Review review_from_json(const json& j) {
  if (!j.is_object() || !j.contains("store") || !j.at("store").is_string()) {
    throw DomainError("review record needs a store");
  }
  const auto store = parse_store(j.at("store").get_ref<const std::string&>());
  if (!store) throw DomainError("review record has an unknown store");
  std::string why;
  auto r = parse_review_record(j, *store, &why);
  if (!r) throw DomainError("bad review record: " + why);
  return std::move(*r);
}

Corpus Corpus::open(const std::filesystem::path& log) {
  Corpus c;
  if (std::filesystem::exists(log)) {
    std::ifstream in(log);
    if (!in) throw IoError("cannot read corpus log " + log.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      try {
        c.insert_indexed(review_from_json(json::parse(line)));
      } catch (const std::exception& e) {
        throw IoError(fmt::format("corrupt corpus log {}:{}: {}", log.string(), lineno, e.what()));
      }
    }
  }
  c.log_path_ = log;
  return c;
}

bool Corpus::insert_indexed(Review review) {
  auto key = review.key();
  if (index_.contains(key)) return false;
  index_.emplace(std::move(key), reviews_.size());
  reviews_.push_back(std::move(review));
  return true;
}

bool Corpus::insert(Review review) {
  validate(review);
  const auto before = reviews_.size();
  if (!insert_indexed(std::move(review))) return false;
  append_to_log(before);
  return true;
}

void Corpus::append_to_log(std::size_t first_new) const {
  if (!log_path_ || first_new >= reviews_.size()) return;
  std::ofstream out(*log_path_, std::ios::app);
  if (!out) throw IoError("cannot append to corpus log " + log_path_->string());
  for (std::size_t i = first_new; i < reviews_.size(); ++i) {
    out << review_to_json(reviews_[i]).dump() << '\n';
  }
  if (!out) throw IoError("write failed on corpus log " + log_path_->string());
}

IngestSummary Corpus::import_reviews(std::istream& source, InputFormat format, Store store) {
  if (!source.good()) throw IoError("input stream is not readable");
  IngestSummary summary;
  const auto before = reviews_.size();

  auto consume = [&](const json& rec) {
    auto r = parse_review_record(rec, store);
    if (!r) {
      ++summary.malformed;
    } else if (insert_indexed(std::move(*r))) {
      ++summary.imported;
    } else {
      ++summary.duplicates;
    }
  };

  if (format == InputFormat::JsonLines) {
    std::string line;
    while (std::getline(source, line)) {
      if (trim(line).empty()) continue;
      json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
      if (rec.is_discarded()) {
        ++summary.malformed;
        continue;
      }
      consume(rec);
    }
  } else {
    CsvReader reader(source);
    auto header = reader.next();
    if (header) {
      std::vector<std::string> columns;
      for (const auto& h : header->fields) columns.push_back(to_lower_ascii(trim(h)));
      while (auto rec = reader.next()) {
        if (rec->fields.size() == 1 && trim(rec->fields[0]).empty()) continue;
        if (!rec->well_formed || rec->fields.size() != columns.size()) {
          ++summary.malformed;
          continue;
        }
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) {
          const auto& name = columns[i];
          const auto& value = rec->fields[i];
          if (name == "rating") {
            // CSV is untyped; only a bare integer counts.
            const auto v = trim(value);
            if (!v.empty() && std::all_of(v.begin(), v.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
                v.size() < 6) {
              obj[name] = std::stoi(std::string(v));
            } else if (!v.empty()) {
              obj[name] = std::string(v);
            }
          } else if (!value.empty()) {
            obj[name] = value;
          }
        }
        consume(obj);
      }
    }
  }
  if (source.bad()) throw IoError("read error on input stream");
  append_to_log(before);
  return summary;
}

const Review* Corpus::find(const ReviewKey& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : &reviews_[it->second];
}

std::vector<const Review*> Corpus::eligible(const CorpusConfig& cfg,
                                            const LanguageDetector& detector) const {
  std::vector<const Review*> out;
  for (const auto& r : reviews_) {
    if (is_eligible(r, cfg, detector)) out.push_back(&r);
  }
  return out;
}

std::vector<const Review*> Corpus::eligible(const CorpusConfig& cfg) const {
  return eligible(cfg, StopwordLanguageDetector(cfg.english_stopword_hit_min));
}

}  // namespace harass
