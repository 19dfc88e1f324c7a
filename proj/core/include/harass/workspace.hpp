// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "harass/active_learning.hpp"
#include "harass/expansion.hpp"

namespace harass {

/// Open-round tasks as persisted between commands.
struct TaskBoard {
  std::optional<std::size_t> round;
  std::vector<AnnotationTask> tasks;
  /// Tasks of finished rounds; agreement is computed over these too.
  std::vector<AnnotationTask> history;
};

/// A state directory shared by the CLI and the service:
///   corpus.jsonl  al_state.json  model.json  tasks.json
///   audit.jsonl   decisions.jsonl  apps.json
class Workspace {
 public:
  /// Creates the directory if needed.
  explicit Workspace(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path corpus() const { return dir_ / "corpus.jsonl"; }
  std::filesystem::path al_state() const { return dir_ / "al_state.json"; }
  std::filesystem::path model() const { return dir_ / "model.json"; }
  std::filesystem::path tasks() const { return dir_ / "tasks.json"; }
  std::filesystem::path audit() const { return dir_ / "audit.jsonl"; }
  std::filesystem::path decisions() const { return dir_ / "decisions.jsonl"; }
  std::filesystem::path apps() const { return dir_ / "apps.json"; }

  bool has_al_state() const { return std::filesystem::exists(al_state()); }
  /// Writes al_state.json and, when trained, model.json.
  void save_al_state(const ALState& s) const;
  ALState load_al_state() const;

  void save_tasks(const TaskBoard& board) const;
  /// Empty board when tasks.json does not exist.
  TaskBoard load_tasks() const;

  void save_apps(const std::vector<AppRecord>& apps) const;
  /// Empty when apps.json does not exist.
  std::vector<AppRecord> load_apps() const;

 private:
  std::filesystem::path dir_;
};

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace harass
