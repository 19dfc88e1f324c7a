// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/workspace.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "harass/annotation.hpp"
#include "harass/config.hpp"
#include "harass/error.hpp"

namespace harass {

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt state file " + path.string() + ": " + e.what());
  }
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

Workspace::Workspace(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw IoError("cannot create state directory " + dir_.string() + ": " + ec.message());
}

void Workspace::save_al_state(const ALState& s) const {
  nlohmann::json labeled = nlohmann::json::array();
  for (const auto& l : s.labeled_pool) {
    auto j = review_to_json(l.review);
    j["label"] = {{"menacing", l.labels.menacing}, {"profiling", l.labels.profiling}};
    labeled.push_back(std::move(j));
  }
  nlohmann::json unlabeled = nlohmann::json::array();
  for (const auto& r : s.unlabeled_pool) unlabeled.push_back(review_to_json(r));
  const nlohmann::json doc = {{"round_index", s.round_index},
                              {"rounds_total", s.rounds_total},
                              {"batch_size", s.batch_size},
                              {"train", to_json(s.train_config)},
                              {"targets", {{"menacing", s.targets.menacing},
                                           {"profiling", s.targets.profiling}}},
                              {"labeled", labeled},
                              {"unlabeled", unlabeled}};
  if (s.model) write_file_atomic(model(), s.model->to_json().dump() + "\n");
  write_file_atomic(al_state(), doc.dump() + "\n");
}

ALState Workspace::load_al_state() const {
  const auto doc = read_json(al_state());
  ALState s;
  try {
    s.round_index = doc.at("round_index").get<std::size_t>();
    s.rounds_total = doc.at("rounds_total").get<std::size_t>();
    s.batch_size = doc.at("batch_size").get<std::size_t>();
    s.train_config = train_config_from_json(doc.at("train"));
    s.targets = {doc.at("targets").at("menacing").get<double>(),
                 doc.at("targets").at("profiling").get<double>()};
    for (const auto& j : doc.at("labeled")) {
      const auto& l = j.at("label");
      s.labeled_pool.push_back(
          {review_from_json(j), {l.at("menacing").get<bool>(), l.at("profiling").get<bool>()}});
    }
    for (const auto& j : doc.at("unlabeled")) s.unlabeled_pool.push_back(review_from_json(j));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt state file " + al_state().string() + ": " + e.what());
  }
  if (s.round_index > s.rounds_total) throw IoError("corrupt state: round_index > rounds_total");
  if (std::filesystem::exists(model())) s.model = LinearModel::load(model());
  return s;
}

void Workspace::save_tasks(const TaskBoard& board) const {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : board.tasks) tasks.push_back(to_json(t));
  nlohmann::json history = nlohmann::json::array();
  for (const auto& t : board.history) history.push_back(to_json(t));
  const nlohmann::json doc = {
      {"round", board.round ? nlohmann::json(*board.round) : nlohmann::json(nullptr)},
      {"tasks", tasks},
      {"history", history}};
  write_file_atomic(this->tasks(), doc.dump(1) + "\n");
}

TaskBoard Workspace::load_tasks() const {
  TaskBoard board;
  if (!std::filesystem::exists(tasks())) return board;
  const auto doc = read_json(tasks());
  try {
    if (!doc.at("round").is_null()) board.round = doc.at("round").get<std::size_t>();
    for (const auto& t : doc.at("tasks")) board.tasks.push_back(task_from_json(t));
    for (const auto& t : doc.value("history", nlohmann::json::array())) {
      board.history.push_back(task_from_json(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError("corrupt state file " + tasks().string() + ": " + e.what());
  } catch (const SchemaError& e) {
    throw IoError("corrupt state file " + tasks().string() + ": " + e.what());
  }
  return board;
}

void Workspace::save_apps(const std::vector<AppRecord>& apps) const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& a : apps) list.push_back(app_to_json(a));
  write_file_atomic(this->apps(), nlohmann::json{{"apps", list}}.dump(1) + "\n");
}

std::vector<AppRecord> Workspace::load_apps() const {
  if (!std::filesystem::exists(apps())) return {};
  return FixtureStoreClient::load(apps()).apps();
}

}  // namespace harass
