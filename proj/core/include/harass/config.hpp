// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "harass/active_learning.hpp"
#include "harass/classifier.hpp"
#include "harass/corpus.hpp"

namespace harass {

struct PathsConfig {
  std::filesystem::path state_dir = "state";
  /// Empty means the built-in list.
  std::filesystem::path lexicon;
  std::filesystem::path subtypes;
  std::filesystem::path emotions;
  std::filesystem::path gender_terms;
  std::filesystem::path apps;
};

struct ServiceConfig {
  std::string bind = "127.0.0.1";
  int port = 8080;
  /// token → annotator id
  std::map<std::string, std::string> tokens;
};

struct PipelineConfig {
  PathsConfig paths;
  CorpusConfig corpus;
  TrainConfig train;
  RecallTargets targets;
  std::size_t rounds_total = 3;
  std::size_t batch_size = 200;
  std::size_t annotators_per_task = 2;
  std::size_t flag_reviews = 50;
  std::size_t flag_table = 500;
  ServiceConfig service;

  ALConfig al() const { return {rounds_total, batch_size, train, targets}; }
  void validate() const;

  /// INI sections: [paths] [corpus] [train] [thresholds] [active_learning]
  /// [service] [tokens]. Under [tokens] each line is `annotator = token`.
  /// Unknown sections or keys throw UsageError; bad values throw
  /// DomainError. Relative paths resolve against the file's directory.
  static PipelineConfig parse(std::istream& in, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
};

/// Effective settings, tokens left out.
nlohmann::json to_json(const PipelineConfig& c);

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);

}  // namespace harass
