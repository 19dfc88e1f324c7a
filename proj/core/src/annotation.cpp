// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/annotation.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <nlohmann/json.hpp>

#include "harass/error.hpp"

namespace harass {

namespace {

nlohmann::json label_json(const LabelSet& l) {
  return {{"menacing", l.menacing}, {"profiling", l.profiling}};
}

LabelSet label_from(const nlohmann::json& j) {
  return {j.at("menacing").get<bool>(), j.at("profiling").get<bool>()};
}

}  // namespace

nlohmann::json to_json(const AnnotationTask& t) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : t.labels) {
    auto e = label_json(l.label);
    e["annotator"] = l.annotator;
    labels.push_back(std::move(e));
  }
  return {{"task_id", t.task_id},
          {"store", to_string(t.review_ref.store)},
          {"app_id", t.review_ref.app_id},
          {"review_id", t.review_ref.review_id},
          {"text", t.snapshot_text},
          {"p_menacing", t.model_prediction.p_menacing},
          {"p_profiling", t.model_prediction.p_profiling},
          {"uncertainty", t.uncertainty()},
          {"round", t.round},
          {"status", to_string(t.status)},
          {"labels", labels},
          {"final", t.final_label ? label_json(*t.final_label) : nlohmann::json(nullptr)}};
}

AnnotationTask task_from_json(const nlohmann::json& j) {
  try {
    AnnotationTask t;
    t.task_id = j.at("task_id").get<std::string>();
    const auto store = parse_store(j.at("store").get<std::string>());
    if (!store) throw SchemaError("bad store in task " + t.task_id);
    t.review_ref = {*store, j.at("app_id").get<std::string>(), j.at("review_id").get<std::string>()};
    t.snapshot_text = j.at("text").get<std::string>();
    t.model_prediction = {j.at("p_menacing").get<double>(), j.at("p_profiling").get<double>()};
    t.round = j.at("round").get<std::size_t>();
    const auto status = parse_task_status(j.at("status").get<std::string>());
    if (!status) throw SchemaError("bad status in task " + t.task_id);
    t.status = *status;
    for (const auto& l : j.at("labels")) {
      t.labels.push_back({l.at("annotator").get<std::string>(), label_from(l)});
    }
    if (!j.at("final").is_null()) t.final_label = label_from(j.at("final"));
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("annotation task: ") + e.what());
  }
}

AuditLog::AuditLog(const std::filesystem::path& path) {
  out_.emplace(path, std::ios::app);
  if (!*out_) throw IoError("cannot open audit log " + path.string());
}

void AuditLog::record(std::string_view task_id, std::string_view annotator, LabelSet label,
                      std::string_view action) {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  nlohmann::json e = {{"task_id", task_id},
                      {"annotator", annotator},
                      {"action", action},
                      {"label", label_json(label)},
                      {"timestamp", fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", now)}};
  std::lock_guard lock(mu_);
  if (out_) {
    *out_ << e.dump() << '\n';
    if (!*out_) throw IoError("audit log write failed");
  }
  ++entries_;
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mu_);
  return entries_;
}

void AuditLog::flush() {
  std::lock_guard lock(mu_);
  if (out_) out_->flush();
}

std::size_t AuditLog::count_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return 0;
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

AnnotationQueue::AnnotationQueue(AnnotationPolicy policy, AuditLog* audit)
    : policy_(policy), audit_(audit) {}

void AnnotationQueue::open_round(std::size_t round, std::vector<AnnotationTask> tasks) {
  std::stable_sort(tasks.begin(), tasks.end(), [](const AnnotationTask& a, const AnnotationTask& b) {
    return a.uncertainty() > b.uncertainty();
  });
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!index.emplace(tasks[i].task_id, i).second) {
      throw DomainError("duplicate task id " + tasks[i].task_id);
    }
  }
  std::lock_guard lock(mu_);
  tasks_ = std::move(tasks);
  index_ = std::move(index);
  round_ = round;
  closed_ = false;
}

void AnnotationQueue::close_round() {
  std::lock_guard lock(mu_);
  closed_ = true;
}

std::optional<std::size_t> AnnotationQueue::current_round() const {
  std::lock_guard lock(mu_);
  if (closed_) return std::nullopt;
  return round_;
}

std::vector<AnnotationTask> AnnotationQueue::next_for(std::string_view annotator,
                                                      std::size_t n) const {
  std::lock_guard lock(mu_);
  std::vector<AnnotationTask> out;
  if (closed_ || !round_) return out;
  for (const auto& t : tasks_) {
    if (out.size() >= n) break;
    if (t.status == TaskStatus::Pending ||
        (t.status == TaskStatus::LabeledOnce && !t.labeled_by(annotator))) {
      out.push_back(t);
    }
  }
  return out;
}

AnnotationTask& AnnotationQueue::find_open(std::string_view task_id) {
  const auto it = index_.find(std::string(task_id));
  if (it == index_.end()) throw NotFoundError(fmt::format("unknown task {}", task_id));
  if (closed_) throw StateError("round closed");
  return tasks_[it->second];
}

AnnotationTask AnnotationQueue::submit(std::string_view task_id, std::string_view annotator,
                                       LabelSet label) {
  std::lock_guard lock(mu_);
  auto& task = find_open(task_id);
  auto updated = submit_label(task, annotator, label, policy_);
  if (audit_) audit_->record(task_id, annotator, label);
  task = std::move(updated);
  ++accepted_;
  return task;
}

AnnotationTask AnnotationQueue::resolve(std::string_view task_id, std::string_view annotator,
                                        LabelSet final) {
  std::lock_guard lock(mu_);
  auto& task = find_open(task_id);
  auto updated = resolve_conflict(task, final);
  if (audit_) audit_->record(task_id, annotator, final, "resolve");
  task = std::move(updated);
  ++accepted_;
  return task;
}

std::vector<AnnotationTask> AnnotationQueue::snapshot() const {
  std::lock_guard lock(mu_);
  return tasks_;
}

std::size_t AnnotationQueue::accepted_submissions() const {
  std::lock_guard lock(mu_);
  return accepted_;
}

}  // namespace harass
