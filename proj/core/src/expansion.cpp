// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/expansion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>
#include <fstream>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "harass/error.hpp"

namespace harass {

void SimilarAppGraph::add_node(const std::string& app_id) { adjacency_.try_emplace(app_id); }

void SimilarAppGraph::add_edge(const std::string& from, const std::string& to) {
  add_node(from);
  add_node(to);
  if (from == to) return;
  auto& out = adjacency_[from];
  if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
}

std::vector<std::string> SimilarAppGraph::similar(const std::string& app_id) const {
  const auto it = adjacency_.find(app_id);
  return it == adjacency_.end() ? std::vector<std::string>{} : it->second;
}

nlohmann::json app_to_json(const AppRecord& a) {
  return {{"app_id", a.app_id}, {"store", to_string(a.store)}, {"name", a.name}, {"category", a.category}};
}

AppRecord app_from_json(const nlohmann::json& a) {
  AppRecord rec;
  rec.app_id = a.at("app_id").get<std::string>();
  const auto store = parse_store(a.value("store", "apple"));
  if (!store) throw DomainError("unknown store for app " + rec.app_id);
  rec.store = *store;
  rec.name = a.value("name", rec.app_id);
  rec.category = a.value("category", "");
  return rec;
}

FixtureStoreClient FixtureStoreClient::load(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("app graph fixture: {}", e.what()));
  }
  FixtureStoreClient client;
  try {
    for (const auto& a : doc.value("apps", nlohmann::json::array())) {
      auto rec = app_from_json(a);
      client.graph_.add_node(rec.app_id);
      client.apps_.push_back(std::move(rec));
    }
    const auto similar = doc.value("similar", nlohmann::json::object());
    for (const auto& [from, targets] : similar.items()) {
      client.graph_.add_node(from);
      for (const auto& t : targets) client.graph_.add_edge(from, t.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(fmt::format("app graph fixture: {}", e.what()));
  }
  return client;
}

FixtureStoreClient FixtureStoreClient::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open app graph " + path.string());
  return load(in);
}

const AppRecord* FixtureStoreClient::find_app(const std::string& app_id) const {
  for (const auto& a : apps_) {
    if (a.app_id == app_id) return &a;
  }
  return nullptr;
}

std::vector<std::string> expand_seeds(std::span<const std::string> seeds,
                                      const SimilarAppProvider& provider, std::size_t max_apps,
                                      std::size_t max_depth) {
  if (seeds.empty()) throw DomainError("expand_seeds: empty seed list");

  std::vector<std::string> result;
  std::unordered_set<std::string> seen;
  std::deque<std::pair<std::string, std::size_t>> frontier;
  for (const auto& s : seeds) {
    if (seen.insert(s).second) {
      result.push_back(s);
      frontier.emplace_back(s, 0);
    }
  }
  if (max_apps < result.size()) {
    throw DomainError(fmt::format("max_apps {} is smaller than the {} seeds", max_apps,
                                  result.size()));
  }

  while (!frontier.empty() && result.size() < max_apps) {
    auto [app, depth] = std::move(frontier.front());
    frontier.pop_front();
    if (depth >= max_depth) continue;
    for (auto& next : provider.similar(app)) {
      if (next == app || !seen.insert(next).second) continue;
      result.push_back(next);
      if (result.size() == max_apps) break;
      frontier.emplace_back(std::move(next), depth + 1);
    }
  }
  return result;
}

}  // namespace harass
