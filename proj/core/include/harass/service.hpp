// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "harass/active_learning.hpp"
#include "harass/annotation.hpp"
#include "harass/emotion.hpp"
#include "harass/gender.hpp"
#include "harass/lexicon.hpp"
#include "harass/workspace.hpp"

namespace httplib {
class Server;
}

namespace harass {

/// Active-learning state, the open round's queue and the audit log of one
/// workspace. Shared by the HTTP service and the CLI.
///
/// Label traffic holds the state lock shared; advancing a round holds it
/// exclusively, so selection always sees a consistent model.
class RoundController {
 public:
  /// Loads al_state.json and tasks.json; throws StateError when the
  /// workspace has no active-learning state yet.
  RoundController(Workspace ws, KeywordLexicon lex, AnnotationPolicy policy = {});
  ~RoundController();

  /// Bootstraps a fresh state from seed labels, saves it and opens round 1.
  static void start(const Workspace& ws, ALState state, const KeywordLexicon& lex);

  std::vector<AnnotationTask> next_tasks(const std::string& annotator, std::size_t n) const;
  /// Rejects tasks of finished rounds with StateError("round closed").
  AnnotationTask submit(const std::string& task_id, const std::string& annotator, LabelSet label);
  AnnotationTask resolve(const std::string& task_id, const std::string& annotator, LabelSet final);

  /// Original labels of every doubly-labeled task, past rounds included.
  AgreementReport agreement() const;

  /// Retrains on the completed open round and opens the next one while
  /// rounds remain. StateError when tasks are unfinished or all rounds ran.
  RoundSummary advance();

  std::optional<std::size_t> open_round() const { return queue_.current_round(); }
  std::size_t round_index() const;
  std::size_t rounds_total() const;
  std::vector<AnnotationTask> tasks() const { return queue_.snapshot(); }
  std::size_t accepted_submissions() const { return queue_.accepted_submissions(); }
  nlohmann::json status() const;

  void flush();

 private:
  void persist_tasks();

  Workspace ws_;
  KeywordLexicon lex_;
  AnnotationPolicy policy_;
  mutable std::shared_mutex state_mu_;
  ALState state_;
  AuditLog audit_;
  AnnotationQueue queue_;
  std::mutex persist_mu_;
  std::vector<AnnotationTask> history_;
  std::set<std::string> closed_ids_;
};

struct ServiceOptions {
  std::string bind = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// bearer token → annotator id
  std::map<std::string, std::string> tokens;
  AnnotationPolicy policy;
  KeywordLexicon lexicon = default_harassment_lexicon();
  SubtypeLexicons subtypes = default_subtype_lexicons();
  EmotionLexicon emotions = default_emotion_lexicon();
  GenderTerms gender_terms = default_gender_terms();
};

/// JSON API over a workspace. Every route except /health needs
/// `Authorization: Bearer <token>`; errors come back as {"code","message"}.
class Service {
 public:
  /// Throws UsageError without tokens and IoError/StateError for unreadable
  /// state.
  Service(Workspace ws, ServiceOptions opts);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; throws IoError on failure. Returns the bound port.
  int bind();
  /// Serves until stop(). Call bind() first.
  void run();
  void stop();
  void wait_until_ready() const;

  RoundController& controller() { return *controller_; }

 private:
  void install_routes();

  Workspace ws_;
  ServiceOptions opts_;
  std::unique_ptr<RoundController> controller_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace harass
