// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>
#include <tuple>

#include "harass/csv.hpp"
#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out;
}

std::size_t parse_count(const std::string& s, std::size_t line) {
  const auto t = std::string(trim(s));
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw SchemaError(fmt::format("table row {}: '{}' is not a count", line, s));
  }
  return std::stoull(t);
}

}  // namespace

void AppHarassmentReport::validate() const {
  if (both > std::min(menacing, profiling)) {
    throw DomainError(fmt::format("{}: both {} exceeds a head count", app.name, both));
  }
  if (total != menacing + profiling - both) {
    throw DomainError(fmt::format("{}: total {} != {} + {} - {}", app.name, total, menacing,
                                  profiling, both));
  }
  if (flagged_50 != (total > kReviewFlagThreshold) || flagged_500 != (total > kTableThreshold)) {
    throw DomainError(fmt::format("{}: flags disagree with total {}", app.name, total));
  }
}

AppHarassmentReport make_report(AppRecord app, std::size_t menacing, std::size_t profiling,
                                std::size_t both, std::set<Subtype> subtypes) {
  if (both > std::min(menacing, profiling)) {
    throw DomainError(fmt::format("{}: both {} exceeds a head count", app.name, both));
  }
  AppHarassmentReport r;
  r.app = std::move(app);
  r.menacing = menacing;
  r.profiling = profiling;
  r.both = both;
  r.total = menacing + profiling - both;
  r.subtypes = std::move(subtypes);
  r.flagged_50 = r.total > kReviewFlagThreshold;
  r.flagged_500 = r.total > kTableThreshold;
  return r;
}

AppHarassmentReport aggregate_app(const AppRecord& app,
                                  std::span<const std::pair<Review, LabelSet>> decisions,
                                  const SubtypeLexicons& subs) {
  std::size_t m = 0, p = 0, b = 0;
  std::set<Subtype> subtypes;
  for (const auto& [review, labels] : decisions) {
    if (review.app_id != app.app_id || review.store != app.store) {
      throw DomainError(fmt::format("review {} belongs to {}, not {}", review.review_id,
                                    review.app_id, app.app_id));
    }
    if (!labels.any()) continue;
    m += labels.menacing;
    p += labels.profiling;
    b += labels.menacing && labels.profiling;
    subtypes.merge(tag_subtypes(review.text, subs));
  }
  return make_report(app, m, p, b, std::move(subtypes));
}

std::vector<AppHarassmentReport> aggregate_all(
    std::span<const std::pair<Review, LabelSet>> decisions, std::span<const AppRecord> apps,
    const SubtypeLexicons& subs) {
  std::map<std::pair<Store, std::string>, AppRecord> known;
  for (const auto& a : apps) known.emplace(std::pair{a.store, a.app_id}, a);
  std::map<std::pair<Store, std::string>, std::vector<std::pair<Review, LabelSet>>> groups;
  for (const auto& d : decisions) groups[{d.first.store, d.first.app_id}].push_back(d);
  std::vector<AppHarassmentReport> out;
  for (const auto& [key, items] : groups) {
    AppRecord app;
    if (const auto it = known.find(key); it != known.end()) {
      app = it->second;
    } else {
      app.store = key.first;
      app.app_id = key.second;
      app.name = key.second;
    }
    out.push_back(aggregate_app(app, items, subs));
  }
  return out;
}

StoreDistribution store_distribution(std::span<const std::pair<Store, LabelSet>> decisions) {
  struct Counts {
    std::size_t p = 0, m = 0, b = 0;
  };
  std::map<Store, Counts> counts;
  std::set<Store> seen;
  for (const auto& [store, l] : decisions) {
    seen.insert(store);
    auto& c = counts[store];
    if (l.menacing && l.profiling) ++c.b;
    else if (l.menacing) ++c.m;
    else if (l.profiling) ++c.p;
  }
  StoreDistribution d;
  for (const auto& [store, c] : counts) {
    const auto n = c.p + c.m + c.b;
    if (n == 0) {
      d.warnings.push_back(fmt::format("store {} has no flagged reviews", to_string(store)));
      continue;
    }
    const auto dn = static_cast<double>(n);
    d.stores[store] = {n, static_cast<double>(c.p) / dn, static_cast<double>(c.m) / dn,
                       static_cast<double>(c.b) / dn};
  }
  return d;
}

std::string format_percent(double proportion) {
  // Round half away from zero on the percentage, not on the binary value of
  // the proportion: 0.0305 should print as 3.1.
  const double tenths = std::round(proportion * 1000.0 + 1e-9);
  return fmt::format("{:.1f}", tenths / 10.0);
}

std::vector<AppHarassmentReport> flag_apps(std::span<const AppHarassmentReport> reports,
                                           std::size_t threshold) {
  std::vector<AppHarassmentReport> out;
  for (const auto& r : reports) {
    if (r.total > threshold) out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(b.total, a.app.name) < std::tie(a.total, b.app.name);
  });
  return out;
}

std::string render_table(std::span<const AppHarassmentReport> reports, TableFormat format) {
  const std::vector<std::string> header = {"App Name", "Harassment Types", "Total", "Menacing",
                                           "Profiling"};
  std::string out;
  if (format == TableFormat::Csv) {
    out += csv_row(header);
    for (const auto& r : reports) {
      const std::vector<std::string> row = {r.app.name, join(sorted_subtype_names(r.subtypes), ", "),
                                            std::to_string(r.total), std::to_string(r.menacing),
                                            std::to_string(r.profiling)};
      out += csv_row(row);
    }
    return out;
  }
  out += "| App Name | Harassment Types | Total | Menacing | Profiling |\n";
  out += "|---|---|---:|---:|---:|\n";
  for (const auto& r : reports) {
    out += fmt::format("| {} | {} | {} | {} | {} |\n", md_cell(r.app.name),
                       md_cell(join(sorted_subtype_names(r.subtypes), ", ")), r.total, r.menacing,
                       r.profiling);
  }
  return out;
}

std::string render_distribution(const StoreDistribution& dist) {
  std::string out = "| Store | Flagged | Profiling | Menacing | Both |\n|---|---:|---:|---:|---:|\n";
  for (const auto& [store, c] : dist.stores) {
    out += fmt::format("| {} | {} | {} | {} | {} |\n", to_string(store), c.flagged,
                       format_percent(c.profiling_only), format_percent(c.menacing_only),
                       format_percent(c.both));
  }
  return out;
}

std::string redact_excerpt(std::string_view text, std::size_t max_chars) {
  static const std::regex email(R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})");
  static const std::regex handle(R"(@[A-Za-z0-9_.]+)");
  auto s = std::regex_replace(std::string(text), email, "[email]");
  s = std::regex_replace(s, handle, "@[user]");
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  if (s.size() > max_chars) {
    auto cut = max_chars;
    // Do not split a UTF-8 sequence.
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
    s = s.substr(0, cut) + "...";
  }
  return s;
}

std::string notification_bundle(const AppHarassmentReport& report,
                                std::span<const Review> examples, std::size_t k) {
  if (!report.flagged_50) {
    throw DomainError(fmt::format("{} has {} harassment reviews; bundles need more than {}",
                                  report.app.name, report.total, kReviewFlagThreshold));
  }
  const auto names = sorted_subtype_names(report.subtypes);
  std::string out = fmt::format("# Harassment report: {}\n\n", report.app.name);
  out += fmt::format("Store: {}  \nApp id: {}\n\n", to_string(report.app.store), report.app.app_id);
  out += "| Total | Menacing | Profiling | Both |\n|---:|---:|---:|---:|\n";
  out += fmt::format("| {} | {} | {} | {} |\n\n", report.total, report.menacing, report.profiling,
                     report.both);
  out += fmt::format("Critical types: {}\n\n", names.empty() ? "none detected" : join(names, ", "));
  const auto n = std::min(k, examples.size());
  out += fmt::format("## Sample reviews ({} of {})\n\n", n, examples.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = examples[i];
    out += fmt::format("{}. ({} stars, {}) {}\n", i + 1, r.rating, format_iso_date(r.posted_date),
                       redact_excerpt(r.text));
  }
  return out;
}

std::vector<TableRow> load_table_rows(std::istream& in) {
  CsvReader reader(in);
  auto header = reader.next();
  if (!header) throw SchemaError("table fixture is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header->fields.size(); ++i) col[std::string(trim(header->fields[i]))] = i;
  for (const char* name : {"store", "app_name", "harassment_types", "total", "menacing", "profiling"}) {
    if (!col.contains(name)) throw SchemaError(std::string("table fixture lacks column ") + name);
  }
  std::vector<TableRow> rows;
  std::size_t line = 1;
  while (auto rec = reader.next()) {
    ++line;
    if (!rec->well_formed || rec->fields.size() != header->fields.size()) {
      throw SchemaError(fmt::format("table row {}: malformed", line));
    }
    const auto& f = rec->fields;
    TableRow row;
    const auto store = parse_store(to_lower_ascii(trim(f[col["store"]])));
    if (!store) throw SchemaError(fmt::format("table row {}: unknown store", line));
    row.store = *store;
    row.app_name = std::string(trim(f[col["app_name"]]));
    std::stringstream types(f[col["harassment_types"]]);
    std::string part;
    while (std::getline(types, part, ',')) {
      if (trim(part).empty()) continue;
      const auto s = parse_subtype(trim(part));
      if (!s) throw SchemaError(fmt::format("table row {}: unknown subtype '{}'", line, part));
      row.subtypes.insert(*s);
    }
    row.total = parse_count(f[col["total"]], line);
    row.menacing = parse_count(f[col["menacing"]], line);
    row.profiling = parse_count(f[col["profiling"]], line);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TableRow> load_table_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open table fixture " + path.string());
  return load_table_rows(in);
}

nlohmann::json to_json(const AppHarassmentReport& r) {
  return {{"app_id", r.app.app_id},         {"store", to_string(r.app.store)},
          {"name", r.app.name},             {"total", r.total},
          {"menacing", r.menacing},         {"profiling", r.profiling},
          {"both", r.both},                 {"subtypes", sorted_subtype_names(r.subtypes)},
          {"flagged_50", r.flagged_50},     {"flagged_500", r.flagged_500}};
}

nlohmann::json to_json(const StoreDistribution& d) {
  nlohmann::json stores = nlohmann::json::object();
  for (const auto& [store, c] : d.stores) {
    stores[std::string(to_string(store))] = {
        {"flagged", c.flagged},
        {"profiling_only", c.profiling_only},
        {"menacing_only", c.menacing_only},
        {"both", c.both},
        {"percent",
         {{"profiling_only", format_percent(c.profiling_only)},
          {"menacing_only", format_percent(c.menacing_only)},
          {"both", format_percent(c.both)}}}};
  }
  return {{"stores", stores}, {"warnings", d.warnings}};
}

}  // namespace harass
