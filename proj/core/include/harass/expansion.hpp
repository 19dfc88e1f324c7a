// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/corpus.hpp"

namespace harass {

struct AppRecord {
  std::string app_id;
  Store store = Store::Apple;
  std::string name;
  std::string category;
};

nlohmann::json app_to_json(const AppRecord& a);
/// Missing store defaults to apple, missing name to the id.
AppRecord app_from_json(const nlohmann::json& j);

/// Source of "similar app" links. The shipped implementation is a fixture
/// graph; a live store client would implement the same interface.
class SimilarAppProvider {
 public:
  virtual ~SimilarAppProvider() = default;
  virtual std::vector<std::string> similar(const std::string& app_id) const = 0;
};

/// Directed adjacency. Edge targets are added as leaf nodes; self-loops are
/// dropped.
class SimilarAppGraph final : public SimilarAppProvider {
 public:
  void add_node(const std::string& app_id);
  void add_edge(const std::string& from, const std::string& to);

  std::vector<std::string> similar(const std::string& app_id) const override;
  bool contains(const std::string& app_id) const { return adjacency_.contains(app_id); }
  const std::map<std::string, std::vector<std::string>>& adjacency() const { return adjacency_; }

 private:
  std::map<std::string, std::vector<std::string>> adjacency_;
};

/// Mock store client backed by the JSON fixture
/// `{"apps": [AppRecord...], "similar": {"id": ["id", ...]}}`.
class FixtureStoreClient final : public SimilarAppProvider {
 public:
  static FixtureStoreClient load(std::istream& in);
  static FixtureStoreClient load(const std::filesystem::path& path);

  std::vector<std::string> similar(const std::string& app_id) const override {
    return graph_.similar(app_id);
  }
  const SimilarAppGraph& graph() const { return graph_; }
  const std::vector<AppRecord>& apps() const { return apps_; }
  const AppRecord* find_app(const std::string& app_id) const;

 private:
  SimilarAppGraph graph_;
  std::vector<AppRecord> apps_;
};

/// Breadth-first closure of `seeds` over the provider, seeds first in input
/// order, then discovery order. Stops at `max_apps` results and never goes
/// more than `max_depth` hops from a seed. Duplicate seeds collapse to their
/// first occurrence.
std::vector<std::string> expand_seeds(std::span<const std::string> seeds,
                                      const SimilarAppProvider& provider, std::size_t max_apps,
                                      std::size_t max_depth);

}  // namespace harass
