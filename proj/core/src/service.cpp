// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/service.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <charconv>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>

#include "harass/corpus.hpp"
#include "harass/decisions.hpp"
#include "harass/error.hpp"
#include "harass/report.hpp"

namespace harass {

namespace {

constexpr std::string_view kRoundClosed = "round closed";

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json to_json(const AgreementReport& a) {
  return {{"kappa_menacing", opt(a.kappa_menacing)},
          {"kappa_profiling", opt(a.kappa_profiling)},
          {"n_items", a.n_items}};
}

}  // namespace

RoundController::RoundController(Workspace ws, KeywordLexicon lex, AnnotationPolicy policy)
    : ws_(std::move(ws)),
      lex_(std::move(lex)),
      policy_(policy),
      state_([this] {
        if (!ws_.has_al_state()) {
          throw StateError("no active-learning state in " + ws_.dir().string() +
                           "; run al-select first");
        }
        auto s = ws_.load_al_state();
        if (!s.model) throw StateError("active-learning state has no model");
        return s;
      }()),
      audit_(ws_.audit()),
      queue_(policy_, &audit_) {
  auto board = ws_.load_tasks();
  history_ = std::move(board.history);
  for (const auto& t : history_) closed_ids_.insert(t.task_id);
  if (board.round) queue_.open_round(*board.round, std::move(board.tasks));
}

RoundController::~RoundController() {
  try {
    flush();
  } catch (...) {
  }
}

void RoundController::start(const Workspace& ws, ALState state, const KeywordLexicon& lex) {
  TaskBoard board;
  if (state.round_index < state.rounds_total) {
    auto batch = select_batch(state, state.batch_size, lex);
    board.round = state.round_index + 1;
    board.tasks = std::move(batch.tasks);
  }
  ws.save_al_state(state);
  ws.save_tasks(board);
}

std::vector<AnnotationTask> RoundController::next_tasks(const std::string& annotator,
                                                        std::size_t n) const {
  std::shared_lock lock(state_mu_);
  return queue_.next_for(annotator, n);
}

AnnotationTask RoundController::submit(const std::string& task_id, const std::string& annotator,
                                       LabelSet label) {
  std::shared_lock lock(state_mu_);
  AnnotationTask out;
  try {
    out = queue_.submit(task_id, annotator, label);
  } catch (const NotFoundError&) {
    if (closed_ids_.contains(task_id)) throw StateError(std::string(kRoundClosed));
    throw;
  }
  persist_tasks();
  return out;
}

AnnotationTask RoundController::resolve(const std::string& task_id, const std::string& annotator,
                                        LabelSet final) {
  std::shared_lock lock(state_mu_);
  AnnotationTask out;
  try {
    out = queue_.resolve(task_id, annotator, final);
  } catch (const NotFoundError&) {
    if (closed_ids_.contains(task_id)) throw StateError(std::string(kRoundClosed));
    throw;
  }
  persist_tasks();
  return out;
}

AgreementReport RoundController::agreement() const {
  std::shared_lock lock(state_mu_);
  auto all = history_;
  if (queue_.current_round()) {
    auto open = queue_.snapshot();
    all.insert(all.end(), open.begin(), open.end());
  }
  return harass::agreement(all);
}

RoundSummary RoundController::advance() {
  std::unique_lock lock(state_mu_);
  if (state_.round_index >= state_.rounds_total) {
    throw StateError(fmt::format("all {} active-learning rounds are done", state_.rounds_total));
  }
  const auto open = queue_.current_round();
  auto tasks = open ? queue_.snapshot() : std::vector<AnnotationTask>{};
  queue_.close_round();
  RoundOutcome outcome;
  try {
    outcome = run_round(state_, tasks);
  } catch (...) {
    if (open) queue_.open_round(*open, tasks);
    throw;
  }
  state_ = std::move(outcome.state);
  for (auto& t : tasks) {
    closed_ids_.insert(t.task_id);
    history_.push_back(std::move(t));
  }
  ws_.save_al_state(state_);
  if (state_.round_index < state_.rounds_total) {
    auto batch = select_batch(state_, state_.batch_size, lex_);
    if (batch.empty_pool) outcome.summary.warnings.push_back("no eligible reviews left to select");
    queue_.open_round(state_.round_index + 1, std::move(batch.tasks));
  }
  persist_tasks();
  audit_.flush();
  return outcome.summary;
}

std::size_t RoundController::round_index() const {
  std::shared_lock lock(state_mu_);
  return state_.round_index;
}

std::size_t RoundController::rounds_total() const {
  std::shared_lock lock(state_mu_);
  return state_.rounds_total;
}

nlohmann::json RoundController::status() const {
  std::shared_lock lock(state_mu_);
  std::map<std::string, std::size_t> counts;
  const auto open = queue_.current_round();
  if (open) {
    for (const auto& t : queue_.snapshot()) ++counts[std::string(to_string(t.status))];
  }
  return {{"round_index", state_.round_index},
          {"rounds_total", state_.rounds_total},
          {"open_round", open ? nlohmann::json(*open) : nlohmann::json(nullptr)},
          {"labeled_pool", state_.labeled_pool.size()},
          {"unlabeled_pool", state_.unlabeled_pool.size()},
          {"tasks", counts}};
}

void RoundController::flush() { audit_.flush(); }

void RoundController::persist_tasks() {
  std::lock_guard lock(persist_mu_);
  TaskBoard board;
  board.round = queue_.current_round();
  if (board.round) board.tasks = queue_.snapshot();
  board.history = history_;
  ws_.save_tasks(board);
}

// --- HTTP -------------------------------------------------------------------

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view msg) {
  send_json(res, status, {{"code", code}, {"message", msg}});
}

LabelSet parse_label_body(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw SchemaError("request body is not JSON");
  }
  if (!j.is_object() || !j.contains("menacing") || !j.contains("profiling") ||
      !j["menacing"].is_boolean() || !j["profiling"].is_boolean()) {
    throw SchemaError("expected {\"menacing\": bool, \"profiling\": bool}");
  }
  return {j["menacing"].get<bool>(), j["profiling"].get<bool>()};
}

std::size_t parse_count_param(const httplib::Request& req, const std::string& name,
                              std::size_t fallback, std::size_t max) {
  if (!req.has_param(name)) return fallback;
  const auto v = req.get_param_value(name);
  std::size_t n = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || n > max) {
    throw SchemaError(fmt::format("query parameter {} must be an integer in [0, {}]", name, max));
  }
  return n;
}

}  // namespace

Service::Service(Workspace ws, ServiceOptions opts) : ws_(std::move(ws)), opts_(std::move(opts)) {
  if (opts_.tokens.empty()) throw UsageError("service needs at least one API token");
  controller_ = std::make_unique<RoundController>(ws_, opts_.lexicon, opts_.policy);
  server_ = std::make_unique<httplib::Server>();
  install_routes();
}

Service::~Service() {
  stop();
  if (controller_) controller_->flush();
}

int Service::bind() {
  if (opts_.port == 0) {
    port_ = server_->bind_to_any_port(opts_.bind);
    if (port_ < 0) throw IoError("cannot bind " + opts_.bind);
  } else {
    if (!server_->bind_to_port(opts_.bind, opts_.port)) {
      throw IoError(fmt::format("cannot bind {}:{}", opts_.bind, opts_.port));
    }
    port_ = opts_.port;
  }
  return port_;
}

void Service::run() {
  if (port_ < 0) throw StateError("Service::run before bind");
  server_->listen_after_bind();
  controller_->flush();
}

void Service::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void Service::wait_until_ready() const { server_->wait_until_ready(); }

void Service::install_routes() {
  using Handler = std::function<void(const httplib::Request&, httplib::Response&,
                                     const std::string& annotator)>;
  // Authenticates, then maps library errors onto status codes.
  auto guarded = [this](Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      const auto auth = req.get_header_value("Authorization");
      constexpr std::string_view prefix = "Bearer ";
      const auto it = auth.starts_with(prefix)
                          ? opts_.tokens.find(auth.substr(prefix.size()))
                          : opts_.tokens.end();
      if (it == opts_.tokens.end()) {
        res.set_header("WWW-Authenticate", "Bearer");
        send_error(res, 401, "unauthorized", "missing or invalid bearer token");
        return;
      }
      try {
        h(req, res, it->second);
      } catch (const SchemaError& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const UsageError& e) {
        send_error(res, 400, "bad_request", e.what());
      } catch (const NotFoundError& e) {
        send_error(res, 404, "not_found", e.what());
      } catch (const StateError& e) {
        const bool closed = std::string_view(e.what()) == kRoundClosed;
        send_error(res, 409, closed ? "round_closed" : "conflict", e.what());
      } catch (const DomainError& e) {
        send_error(res, 422, "invalid", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  };

  auto load_joined = [this] {
    if (!std::filesystem::exists(ws_.decisions())) {
      throw NotFoundError("no decisions yet; run classify first");
    }
    const auto decisions = read_decisions(ws_.decisions());
    const auto corpus = Corpus::open(ws_.corpus());
    return join_decisions(decisions, corpus);
  };

  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server_->Get("/tasks/next", guarded([this](const auto& req, auto& res, const std::string& who) {
    const auto n = parse_count_param(req, "n", 10, 10000);
    const auto tasks = controller_->next_tasks(who, n);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& t : tasks) list.push_back(to_json(t));
    const auto round = controller_->open_round();
    send_json(res, 200,
              {{"round", round ? nlohmann::json(*round) : nlohmann::json(nullptr)},
               {"status", round ? "open" : "closed"},
               {"tasks", list}});
  }));

  server_->Post("/tasks/:id/label", guarded([this](const auto& req, auto& res, const std::string& who) {
    const auto label = parse_label_body(req.body);
    send_json(res, 200, to_json(controller_->submit(req.path_params.at("id"), who, label)));
  }));

  server_->Post("/tasks/:id/resolve", guarded([this](const auto& req, auto& res, const std::string& who) {
    const auto label = parse_label_body(req.body);
    send_json(res, 200, to_json(controller_->resolve(req.path_params.at("id"), who, label)));
  }));

  server_->Get("/agreement", guarded([this](const auto&, auto& res, const std::string&) {
    send_json(res, 200, to_json(controller_->agreement()));
  }));

  server_->Post("/rounds/advance", guarded([this](const auto&, auto& res, const std::string&) {
    const auto summary = controller_->advance();
    send_json(res, 200, {{"summary", harass::to_json(summary)}, {"status", controller_->status()}});
  }));

  server_->Get("/reports/apps", guarded([this, load_joined](const auto& req, auto& res, const std::string&) {
    const auto threshold = parse_count_param(req, "threshold", kReviewFlagThreshold,
                                             std::numeric_limits<std::size_t>::max());
    const auto joined = load_joined();
    const auto apps = ws_.load_apps();
    const auto reports = aggregate_all(joined, apps, opts_.subtypes);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : flag_apps(reports, threshold)) list.push_back(to_json(r));
    send_json(res, 200, {{"threshold", threshold}, {"apps", list}});
  }));

  server_->Get("/reports/distribution", guarded([this](const auto&, auto& res, const std::string&) {
    if (!std::filesystem::exists(ws_.decisions())) {
      throw NotFoundError("no decisions yet; run classify first");
    }
    std::vector<std::pair<Store, LabelSet>> items;
    for (const auto& d : read_decisions(ws_.decisions())) items.emplace_back(d.store, d.labels);
    send_json(res, 200, to_json(store_distribution(items)));
  }));

  server_->Get("/reports/emotions", guarded([this, load_joined](const auto&, auto& res, const std::string&) {
    const LexiconEmotionBackend backend(opts_.emotions);
    send_json(res, 200, to_json(emotion_report(load_joined(), backend)));
  }));

  server_->Get("/reports/gender", guarded([this, load_joined](const auto&, auto& res, const std::string&) {
    send_json(res, 200, to_json(gender_report(load_joined(), opts_.gender_terms)));
  }));

  server_->set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "unknown error";
        try {
          if (ep) std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          msg = e.what();
        } catch (...) {
        }
        send_error(res, 500, "internal", msg);
      });
}

}  // namespace harass
