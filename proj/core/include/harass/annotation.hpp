// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/active_learning.hpp"

namespace harass {

nlohmann::json to_json(const AnnotationTask& t);
AnnotationTask task_from_json(const nlohmann::json& j);

/// Append-only JSONL log of accepted submissions. Without a path the log
/// only counts entries.
class AuditLog {
 public:
  AuditLog() = default;
  explicit AuditLog(const std::filesystem::path& path);

  void record(std::string_view task_id, std::string_view annotator, LabelSet label,
              std::string_view action = "label");
  std::size_t size() const;
  void flush();

  /// Lines currently on disk; used to check log/submission parity.
  static std::size_t count_entries(const std::filesystem::path& path);

 private:
  mutable std::mutex mu_;
  std::optional<std::ofstream> out_;
  std::size_t entries_ = 0;
};

/// Tasks of the currently open round. All mutation happens under one lock so
/// a task's check-and-set is atomic.
class AnnotationQueue {
 public:
  explicit AnnotationQueue(AnnotationPolicy policy = {}, AuditLog* audit = nullptr);

  /// Replaces any previous tasks. Tasks are kept in uncertainty order.
  void open_round(std::size_t round, std::vector<AnnotationTask> tasks);
  void close_round();
  std::optional<std::size_t> current_round() const;

  /// Up to n open tasks `annotator` has not labeled yet, in queue order.
  /// Calling again without submitting returns the same tasks.
  std::vector<AnnotationTask> next_for(std::string_view annotator, std::size_t n) const;

  /// Throws NotFoundError, or StateError("round closed") after close_round.
  AnnotationTask submit(std::string_view task_id, std::string_view annotator, LabelSet label);
  AnnotationTask resolve(std::string_view task_id, std::string_view annotator, LabelSet final);

  std::vector<AnnotationTask> snapshot() const;
  /// Accepted labels plus resolutions; equals the audit entries written.
  std::size_t accepted_submissions() const;

 private:
  AnnotationTask& find_open(std::string_view task_id);

  mutable std::mutex mu_;
  AnnotationPolicy policy_;
  AuditLog* audit_;
  std::vector<AnnotationTask> tasks_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<std::size_t> round_;
  bool closed_ = false;
  std::size_t accepted_ = 0;
};

}  // namespace harass
