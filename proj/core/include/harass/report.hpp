// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/corpus.hpp"
#include "harass/expansion.hpp"
#include "harass/labels.hpp"
#include "harass/lexicon.hpp"

namespace harass {

inline constexpr std::size_t kReviewFlagThreshold = 50;
inline constexpr std::size_t kTableThreshold = 500;

struct AppHarassmentReport {
  AppRecord app;
  /// Reviews flagged Menacing or Profiling.
  std::size_t total = 0;
  std::size_t menacing = 0;
  std::size_t profiling = 0;
  std::size_t both = 0;
  std::set<Subtype> subtypes;
  bool flagged_50 = false;
  bool flagged_500 = false;

  /// Throws DomainError if the union arithmetic or flags are inconsistent.
  void validate() const;
};

/// Builds a report from head counts; total is the union size.
AppHarassmentReport make_report(AppRecord app, std::size_t menacing, std::size_t profiling,
                                std::size_t both, std::set<Subtype> subtypes = {});

/// Throws DomainError if a review belongs to another app.
AppHarassmentReport aggregate_app(const AppRecord& app,
                                  std::span<const std::pair<Review, LabelSet>> decisions,
                                  const SubtypeLexicons& subs = default_subtype_lexicons());

/// Groups by (store, app_id). Apps missing from `apps` use their id as name.
std::vector<AppHarassmentReport> aggregate_all(
    std::span<const std::pair<Review, LabelSet>> decisions,
    std::span<const AppRecord> apps, const SubtypeLexicons& subs = default_subtype_lexicons());

struct StoreCells {
  std::size_t flagged = 0;
  double profiling_only = 0.0;
  double menacing_only = 0.0;
  double both = 0.0;
};

struct StoreDistribution {
  std::map<Store, StoreCells> stores;
  std::vector<std::string> warnings;
};

/// Stores with no flagged review are left out with a warning.
StoreDistribution store_distribution(std::span<const std::pair<Store, LabelSet>> decisions);

/// Proportion as a one-decimal percentage, e.g. 0.698 → "69.8".
std::string format_percent(double proportion);

/// total > threshold, by total descending then name ascending.
std::vector<AppHarassmentReport> flag_apps(std::span<const AppHarassmentReport> reports,
                                           std::size_t threshold);

enum class TableFormat { Markdown, Csv };

std::string render_table(std::span<const AppHarassmentReport> reports, TableFormat format);
std::string render_distribution(const StoreDistribution& dist);

/// Markdown evidence document for a developer. Refuses apps at or under the
/// review flag threshold. Holds at most k excerpts and no author data;
/// @handles and e-mail addresses in excerpts are masked.
std::string notification_bundle(const AppHarassmentReport& report,
                                std::span<const Review> examples, std::size_t k);

std::string redact_excerpt(std::string_view text, std::size_t max_chars = 280);

/// Rows of a published-style summary table: store, app_name,
/// harassment_types, total, menacing, profiling.
struct TableRow {
  Store store = Store::Apple;
  std::string app_name;
  std::set<Subtype> subtypes;
  std::size_t total = 0;
  std::size_t menacing = 0;
  std::size_t profiling = 0;

  /// Overlap implied by the union reading; negative means the row is
  /// inconsistent.
  long long both() const {
    return static_cast<long long>(menacing) + static_cast<long long>(profiling) -
           static_cast<long long>(total);
  }
};

std::vector<TableRow> load_table_rows(std::istream& in);
std::vector<TableRow> load_table_rows(const std::filesystem::path& path);

nlohmann::json to_json(const AppHarassmentReport& r);
nlohmann::json to_json(const StoreDistribution& d);

}  // namespace harass
