// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

// Batch entry points. Every subcommand prints a JSON run summary on stdout
// and diagnostics on stderr.

#include <fmt/format.h>
#include <pthread.h>

#include <CLI11.hpp>
#include <csignal>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "harass/active_learning.hpp"
#include "harass/annotation.hpp"
#include "harass/classifier.hpp"
#include "harass/config.hpp"
#include "harass/corpus.hpp"
#include "harass/decisions.hpp"
#include "harass/emotion.hpp"
#include "harass/error.hpp"
#include "harass/evaluation.hpp"
#include "harass/expansion.hpp"
#include "harass/gender.hpp"
#include "harass/inference_client.hpp"
#include "harass/lexicon.hpp"
#include "harass/report.hpp"
#include "harass/service.hpp"
#include "harass/text.hpp"
#include "harass/workspace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config;
  std::string state;
  std::optional<std::uint64_t> seed;
};

harass::PipelineConfig load_config(const Globals& g) {
  auto cfg = g.config.empty() ? harass::PipelineConfig{} : harass::PipelineConfig::load(g.config);
  if (!g.state.empty()) cfg.paths.state_dir = g.state;
  if (g.seed) cfg.train.rng_seed = *g.seed;
  return cfg;
}

harass::KeywordLexicon lexicon_of(const harass::PipelineConfig& c) {
  return c.paths.lexicon.empty() ? harass::default_harassment_lexicon()
                                 : harass::KeywordLexicon::load(c.paths.lexicon);
}

harass::SubtypeLexicons subtypes_of(const harass::PipelineConfig& c) {
  return c.paths.subtypes.empty() ? harass::default_subtype_lexicons()
                                  : harass::SubtypeLexicons::load(c.paths.subtypes);
}

harass::EmotionLexicon emotions_of(const harass::PipelineConfig& c) {
  return c.paths.emotions.empty() ? harass::default_emotion_lexicon()
                                  : harass::EmotionLexicon::load(c.paths.emotions);
}

harass::GenderTerms gender_terms_of(const harass::PipelineConfig& c) {
  return c.paths.gender_terms.empty() ? harass::default_gender_terms()
                                      : harass::GenderTerms::load(c.paths.gender_terms);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw harass::IoError("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw harass::IoError("write failed: " + path.string());
}

void emit(const json& summary) { std::cout << summary.dump(2) << '\n'; }

fs::path or_default(const std::string& flag, const fs::path& fallback) {
  return flag.empty() ? fallback : fs::path(flag);
}

std::vector<harass::Review> eligible_reviews(const harass::Corpus& corpus,
                                             const harass::CorpusConfig& cfg) {
  std::vector<harass::Review> out;
  for (const auto* r : corpus.eligible(cfg)) out.push_back(*r);
  return out;
}

// --- subcommands -------------------------------------------------------------

struct ImportArgs {
  std::string in;
  std::string store;
  std::string format;
};

void cmd_import(const Globals& g, const ImportArgs& a) {
  const auto cfg = load_config(g);
  const auto store = harass::parse_store(a.store);
  if (!store) throw harass::UsageError("--store must be apple or google");
  auto format = harass::InputFormat::JsonLines;
  const auto fmt_name = a.format.empty() ? fs::path(a.in).extension().string() : "." + a.format;
  if (fmt_name == ".csv") format = harass::InputFormat::Csv;
  else if (fmt_name != ".jsonl" && fmt_name != ".json") {
    throw harass::UsageError("cannot tell the input format; pass --format jsonl|csv");
  }
  std::ifstream in(a.in, std::ios::binary);
  if (!in) throw harass::IoError("cannot open " + a.in);
  const harass::Workspace ws(cfg.paths.state_dir);
  auto corpus = harass::Corpus::open(ws.corpus());
  const auto s = corpus.import_reviews(in, format, *store);
  emit({{"command", "import"},
        {"imported", s.imported},
        {"duplicates", s.duplicates},
        {"malformed", s.malformed},
        {"corpus_size", corpus.size()},
        {"eligible", corpus.eligible(cfg.corpus).size()}});
}

struct ExpandArgs {
  std::string graph;
  std::vector<std::string> seeds;
  std::string seeds_file;
  std::size_t max_apps = 200;
  std::size_t max_depth = 2;
};

void cmd_expand(const Globals& g, ExpandArgs a) {
  const auto cfg = load_config(g);
  const auto client = harass::FixtureStoreClient::load(fs::path(a.graph));
  if (!a.seeds_file.empty()) {
    std::ifstream in(a.seeds_file);
    if (!in) throw harass::IoError("cannot open " + a.seeds_file);
    std::string line;
    while (std::getline(in, line)) {
      const auto body = line.substr(0, line.find('#'));
      const auto id = harass::trim(body);
      if (!id.empty()) a.seeds.emplace_back(id);
    }
  }
  const auto ids = harass::expand_seeds(a.seeds, client, a.max_apps, a.max_depth);
  std::vector<harass::AppRecord> apps;
  std::size_t unknown = 0;
  for (const auto& id : ids) {
    if (const auto* rec = client.find_app(id)) {
      apps.push_back(*rec);
    } else {
      ++unknown;
      apps.push_back({id, harass::Store::Apple, id, ""});
    }
  }
  const harass::Workspace ws(cfg.paths.state_dir);
  ws.save_apps(apps);
  emit({{"command", "expand"},
        {"seeds", a.seeds.size()},
        {"apps", ids.size()},
        {"apps_without_metadata", unknown},
        {"out", ws.apps().string()}});
}

struct SeedArgs {
  std::size_t n = 3050;
  std::string out;
};

void cmd_seed_sample(const Globals& g, const SeedArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto corpus = harass::Corpus::open(ws.corpus());
  const auto lex = lexicon_of(cfg);
  const auto sample = harass::sample_seed_set(corpus, cfg.corpus, lex, a.n, cfg.train.rng_seed);
  auto out = open_out(a.out);
  for (const auto* r : sample.reviews) out << harass::review_to_json(*r).dump() << '\n';
  if (sample.empty_population) std::cerr << "warning: no eligible review matches the lexicon\n";
  emit({{"command", "seed-sample"},
        {"population", sample.population},
        {"sampled", sample.reviews.size()},
        {"empty_population", sample.empty_population},
        {"out", a.out}});
}

struct TrainArgs {
  std::string labels;
  std::string out;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> folds;
};

harass::TrainConfig train_config(const harass::PipelineConfig& cfg, const TrainArgs& a) {
  auto t = cfg.train;
  if (a.epochs) t.epochs = *a.epochs;
  if (a.folds) t.folds = *a.folds;
  t.validate();
  return t;
}

void cmd_train(const Globals& g, const TrainArgs& a) {
  const auto cfg = load_config(g);
  const auto labeled = harass::read_labeled_reviews(fs::path(a.labels));
  const auto fitted = harass::fit_with_thresholds(labeled, train_config(cfg, a), cfg.targets);
  const auto out = or_default(a.out, harass::Workspace(cfg.paths.state_dir).model());
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  fitted.model.save(out);
  emit({{"command", "train"},
        {"examples", labeled.size()},
        {"thresholds", harass::to_json(fitted.selection.thresholds)},
        {"out", out.string()}});
}

void cmd_cross_validate(const Globals& g, const TrainArgs& a) {
  const auto cfg = load_config(g);
  const auto labeled = harass::read_labeled_reviews(fs::path(a.labels));
  const auto tc = train_config(cfg, a);
  const auto cv = harass::cross_validate(labeled, tc, cfg.targets);
  auto report = harass::to_json(cv);
  if (!a.out.empty()) write_text(a.out, report.dump(2) + "\n");
  emit({{"command", "cross-validate"},
        {"examples", labeled.size()},
        {"folds", tc.folds},
        {"epochs", tc.epochs},
        {"mean", report.at("mean")}});
}

struct AlSelectArgs {
  std::string seed_labels;
};

void cmd_al_select(const Globals& g, const AlSelectArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto lex = lexicon_of(cfg);
  harass::ALState state;
  if (ws.has_al_state()) {
    if (!a.seed_labels.empty()) {
      throw harass::StateError("active learning already started; --seed-labels only applies to a fresh state");
    }
    const auto board = ws.load_tasks();
    for (const auto& t : board.tasks) {
      if (!t.labels.empty()) {
        throw harass::StateError("the open round already has labels; finish it with al-advance");
      }
    }
    state = ws.load_al_state();
    if (state.round_index >= state.rounds_total) {
      throw harass::StateError("all active-learning rounds are done");
    }
    // Keep history; only the open round's tasks are rebuilt.
    auto batch = harass::select_batch(state, state.batch_size, lex);
    harass::TaskBoard fresh{state.round_index + 1, std::move(batch.tasks), board.history};
    ws.save_tasks(fresh);
  } else {
    if (a.seed_labels.empty()) throw harass::UsageError("first run needs --seed-labels");
    auto seeds = harass::read_labeled_reviews(fs::path(a.seed_labels));
    const auto corpus = harass::Corpus::open(ws.corpus());
    state = harass::ALState::bootstrap(std::move(seeds), eligible_reviews(corpus, cfg.corpus), cfg.al());
    harass::RoundController::start(ws, state, lex);
  }
  const auto board = ws.load_tasks();
  emit({{"command", "al-select"},
        {"round", board.round ? json(*board.round) : json(nullptr)},
        {"tasks", board.tasks.size()},
        {"empty_pool", board.tasks.empty()},
        {"labeled_pool", state.labeled_pool.size()},
        {"unlabeled_pool", state.unlabeled_pool.size()}});
}

struct AlAdvanceArgs {
  std::string labels;
};

void cmd_al_advance(const Globals& g, const AlAdvanceArgs& a) {
  const auto cfg = load_config(g);
  harass::RoundController ctl(harass::Workspace(cfg.paths.state_dir), lexicon_of(cfg),
                              {cfg.annotators_per_task});
  std::size_t applied = 0;
  if (!a.labels.empty()) {
    // One submission per line: {"task_id", "annotator", "menacing", "profiling"}
    // with optional "resolve": true for a conflict resolution.
    std::ifstream in(a.labels);
    if (!in) throw harass::IoError("cannot open " + a.labels);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (harass::trim(line).empty()) continue;
      try {
        const auto j = json::parse(line);
        const harass::LabelSet l{j.at("menacing").get<bool>(), j.at("profiling").get<bool>()};
        const auto id = j.at("task_id").get<std::string>();
        const auto who = j.at("annotator").get<std::string>();
        if (j.value("resolve", false)) ctl.resolve(id, who, l);
        else ctl.submit(id, who, l);
        ++applied;
      } catch (const json::exception& e) {
        throw harass::SchemaError(fmt::format("{}:{}: {}", a.labels, lineno, e.what()));
      }
    }
  }
  const auto summary = ctl.advance();
  for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
  emit({{"command", "al-advance"},
        {"applied_submissions", applied},
        {"summary", harass::to_json(summary)},
        {"status", ctl.status()}});
}

struct ClassifyArgs {
  std::string in;
  std::string model;
  std::string out;
  std::string endpoint;
};

void cmd_classify(const Globals& g, const ClassifyArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto corpus = harass::Corpus::open(or_default(a.in, ws.corpus()));
  const auto model = harass::LinearModel::load(or_default(a.model, ws.model()));
  if (!model.thresholds) std::cerr << "warning: model has no thresholds; using 0.5\n";
  const auto thresholds = model.thresholds.value_or(harass::Thresholds{});
  const auto reviews = eligible_reviews(corpus, cfg.corpus);
  std::vector<harass::DecisionRecord> decisions;
  if (a.endpoint.empty()) {
    decisions = harass::classify_reviews(reviews, model, thresholds);
  } else {
    const harass::RemoteScorer remote(harass::Endpoint::parse(a.endpoint));
    decisions = harass::classify_reviews(reviews, remote, thresholds);
  }
  const auto out_path = or_default(a.out, ws.decisions());
  auto out = open_out(out_path);
  harass::write_decisions(out, decisions);
  std::size_t m = 0, p = 0, any = 0;
  for (const auto& d : decisions) {
    m += d.labels.menacing;
    p += d.labels.profiling;
    any += d.labels.any();
  }
  emit({{"command", "classify"},
        {"corpus_size", corpus.size()},
        {"classified", decisions.size()},
        {"flagged", any},
        {"menacing", m},
        {"profiling", p},
        {"out", out_path.string()}});
}

struct ReportInputs {
  std::string decisions;
  std::string corpus;
};

std::vector<std::pair<harass::Review, harass::LabelSet>> joined(const harass::Workspace& ws,
                                                                const ReportInputs& in) {
  const auto decisions = harass::read_decisions(or_default(in.decisions, ws.decisions()));
  const auto corpus = harass::Corpus::open(or_default(in.corpus, ws.corpus()));
  return harass::join_decisions(decisions, corpus);
}

struct EmotionArgs {
  ReportInputs in;
  std::string out;
  std::string endpoint;
};

void cmd_emotions(const Globals& g, const EmotionArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto items = joined(ws, a.in);
  json report;
  if (a.endpoint.empty()) {
    report = harass::to_json(harass::emotion_report(items, harass::LexiconEmotionBackend(emotions_of(cfg))));
  } else {
    report = harass::to_json(
        harass::emotion_report(items, harass::RemoteEmotionBackend(harass::Endpoint::parse(a.endpoint))));
  }
  if (!a.out.empty()) write_text(a.out, report.dump(2) + "\n");
  emit({{"command", "emotions"}, {"decisions", items.size()}, {"report", report}});
}

struct GenderArgs {
  ReportInputs in;
  std::string out;
};

void cmd_gender(const Globals& g, const GenderArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto items = joined(ws, a.in);
  const auto report = harass::to_json(harass::gender_report(items, gender_terms_of(cfg)));
  if (!a.out.empty()) write_text(a.out, report.dump(2) + "\n");
  emit({{"command", "gender"}, {"decisions", items.size()}, {"report", report}});
}

struct ReportArgs {
  ReportInputs in;
  std::string fixture;
  std::string store;
  std::optional<std::size_t> threshold;
  std::string format = "markdown";
  std::string out;
  std::string distribution_out;
};

void cmd_report(const Globals& g, const ReportArgs& a) {
  const auto cfg = load_config(g);
  const auto format = a.format == "csv" ? harass::TableFormat::Csv : harass::TableFormat::Markdown;
  std::optional<harass::Store> store_filter;
  if (!a.store.empty()) {
    store_filter = harass::parse_store(a.store);
    if (!store_filter) throw harass::UsageError("--store must be apple or google");
  }
  const auto threshold = a.threshold.value_or(cfg.flag_table);
  std::vector<harass::AppHarassmentReport> reports;
  json summary = {{"command", "report"}, {"threshold", threshold}};
  if (!a.fixture.empty()) {
    for (const auto& row : harass::load_table_rows(fs::path(a.fixture))) {
      if (row.both() < 0) {
        throw harass::DomainError(fmt::format("fixture row {} violates union arithmetic", row.app_name));
      }
      harass::AppRecord app{row.app_name, row.store, row.app_name, ""};
      reports.push_back(harass::make_report(app, row.menacing, row.profiling,
                                            static_cast<std::size_t>(row.both()), row.subtypes));
    }
  } else {
    const harass::Workspace ws(cfg.paths.state_dir);
    const auto items = joined(ws, a.in);
    reports = harass::aggregate_all(items, ws.load_apps(), subtypes_of(cfg));
    std::vector<std::pair<harass::Store, harass::LabelSet>> cells;
    for (const auto& [r, l] : items) cells.emplace_back(r.store, l);
    const auto dist = harass::store_distribution(cells);
    summary["distribution"] = harass::to_json(dist);
    if (!a.distribution_out.empty()) write_text(a.distribution_out, harass::render_distribution(dist));
  }
  if (store_filter) {
    std::erase_if(reports, [&](const auto& r) { return r.app.store != *store_filter; });
  }
  const auto flagged = harass::flag_apps(reports, threshold);
  const auto table = harass::render_table(flagged, format);
  if (a.out.empty()) {
    std::cerr << table;
  } else {
    write_text(a.out, table);
  }
  summary["apps"] = reports.size();
  summary["flagged"] = flagged.size();
  summary["flagged_over_reviews_threshold"] =
      harass::flag_apps(reports, cfg.flag_reviews).size();
  emit(summary);
}

struct BundleArgs {
  ReportInputs in;
  std::string app;
  std::string store;
  std::size_t k = 5;
  std::string out;
};

void cmd_bundle(const Globals& g, const BundleArgs& a) {
  const auto cfg = load_config(g);
  const harass::Workspace ws(cfg.paths.state_dir);
  const auto store = harass::parse_store(a.store);
  if (!store) throw harass::UsageError("--store must be apple or google");
  const auto items = joined(ws, a.in);
  std::vector<std::pair<harass::Review, harass::LabelSet>> mine;
  std::vector<harass::Review> examples;
  for (const auto& it : items) {
    if (it.first.app_id != a.app || it.first.store != *store) continue;
    mine.push_back(it);
    if (it.second.any()) examples.push_back(it.first);
  }
  if (mine.empty()) throw harass::NotFoundError("no decisions for app " + a.app);
  harass::AppRecord app{a.app, *store, a.app, ""};
  for (const auto& rec : ws.load_apps()) {
    if (rec.app_id == a.app && rec.store == *store) app = rec;
  }
  const auto report = harass::aggregate_app(app, mine, subtypes_of(cfg));
  // Most recent evidence first; review_id keeps the order stable.
  std::sort(examples.begin(), examples.end(), [](const auto& x, const auto& y) {
    if (x.posted_date != y.posted_date) return x.posted_date > y.posted_date;
    return x.review_id < y.review_id;
  });
  const auto doc = harass::notification_bundle(report, examples, a.k);
  write_text(a.out, doc);
  emit({{"command", "bundle"},
        {"app", a.app},
        {"total", report.total},
        {"excerpts", std::min(a.k, examples.size())},
        {"out", a.out}});
}

struct ServeArgs {
  std::string bind;
  std::optional<int> port;
};

void cmd_serve(const Globals& g, const ServeArgs& a) {
  const auto cfg = load_config(g);
  harass::ServiceOptions opts;
  opts.bind = a.bind.empty() ? cfg.service.bind : a.bind;
  opts.port = a.port.value_or(cfg.service.port);
  opts.tokens = cfg.service.tokens;
  opts.policy = {cfg.annotators_per_task};
  opts.lexicon = lexicon_of(cfg);
  opts.subtypes = subtypes_of(cfg);
  opts.emotions = emotions_of(cfg);
  opts.gender_terms = gender_terms_of(cfg);

  // Signals are taken by sigwait on this thread; the server runs on another.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  harass::Service service(harass::Workspace(cfg.paths.state_dir), std::move(opts));
  const int port = service.bind();
  std::cerr << fmt::format("listening on {}:{}\n", a.bind.empty() ? cfg.service.bind : a.bind, port);
  std::thread server([&] { service.run(); });
  int sig = 0;
  sigwait(&sigs, &sig);
  service.stop();
  server.join();
  service.controller().flush();
  emit({{"command", "serve"},
        {"port", port},
        {"accepted_submissions", service.controller().accepted_submissions()}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine app-store reviews for harassment reports."};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--state", g.state, "State directory (overrides [paths] state_dir)");
  app.add_option("--seed", g.seed, "RNG seed (overrides [train] rng_seed)");

  ImportArgs import_args;
  auto* import = app.add_subcommand("import", "Append reviews to the corpus");
  import->add_option("--in", import_args.in, "JSONL or CSV file")->required()->check(CLI::ExistingFile);
  import->add_option("--store", import_args.store, "apple or google")->required();
  import->add_option("--format", import_args.format, "jsonl or csv (default: by extension)");

  ExpandArgs expand_args;
  auto* expand = app.add_subcommand("expand", "Grow seed apps over similar-app links");
  expand->add_option("--graph", expand_args.graph, "App graph JSON")->required()->check(CLI::ExistingFile);
  expand->add_option("--seed-app", expand_args.seeds, "Seed app id (repeatable)");
  expand->add_option("--seeds", expand_args.seeds_file, "File with one seed app id per line");
  expand->add_option("--max-apps", expand_args.max_apps);
  expand->add_option("--max-depth", expand_args.max_depth);

  SeedArgs seed_args;
  auto* seed = app.add_subcommand("seed-sample", "Sample keyword-matching reviews to label");
  seed->add_option("-n", seed_args.n);
  seed->add_option("--out", seed_args.out)->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train a model and pick recall thresholds");
  train->add_option("--labels", train_args.labels, "Labeled reviews JSONL")->required()->check(CLI::ExistingFile);
  train->add_option("--out", train_args.out, "Model path (default: state/model.json)");
  train->add_option("--epochs", train_args.epochs);
  train->add_option("--folds", train_args.folds);

  TrainArgs cv_args;
  auto* cv = app.add_subcommand("cross-validate", "Stratified k-fold evaluation");
  cv->add_option("--labels", cv_args.labels, "Labeled reviews JSONL")->required()->check(CLI::ExistingFile);
  cv->add_option("--out", cv_args.out, "Full per-fold report (JSON)");
  cv->add_option("-k,--folds", cv_args.folds);
  cv->add_option("--epochs", cv_args.epochs);

  AlSelectArgs sel_args;
  auto* sel = app.add_subcommand("al-select", "Start active learning or rebuild the open batch");
  sel->add_option("--seed-labels", sel_args.seed_labels, "Labeled seed reviews (first run)")
      ->check(CLI::ExistingFile);

  AlAdvanceArgs adv_args;
  auto* adv = app.add_subcommand("al-advance", "Retrain on the finished round and open the next");
  adv->add_option("--labels", adv_args.labels, "Submissions to apply first (JSONL)")->check(CLI::ExistingFile);

  ClassifyArgs cls_args;
  auto* cls = app.add_subcommand("classify", "Write a decision for every eligible review");
  cls->add_option("--in", cls_args.in, "Corpus JSONL (default: state corpus)");
  cls->add_option("--model", cls_args.model, "Model JSON (default: state model)");
  cls->add_option("--out", cls_args.out, "Decisions JSONL (default: state decisions)");
  cls->add_option("--endpoint", cls_args.endpoint, "Remote inference URL instead of the model");

  auto add_inputs = [](CLI::App* sub, ReportInputs& in) {
    sub->add_option("--decisions", in.decisions, "Decisions JSONL (default: state)");
    sub->add_option("--corpus", in.corpus, "Corpus JSONL (default: state)");
  };

  EmotionArgs emo_args;
  auto* emo = app.add_subcommand("emotions", "Emotion distribution of flagged reviews");
  add_inputs(emo, emo_args.in);
  emo->add_option("--out", emo_args.out);
  emo->add_option("--endpoint", emo_args.endpoint, "Remote emotion model URL");

  GenderArgs gen_args;
  auto* gen = app.add_subcommand("gender", "Abuser gender distribution of flagged reviews");
  add_inputs(gen, gen_args.in);
  gen->add_option("--out", gen_args.out);

  ReportArgs rep_args;
  auto* rep = app.add_subcommand("report", "Per-app harassment table");
  add_inputs(rep, rep_args.in);
  rep->add_option("--fixture", rep_args.fixture, "Table rows CSV instead of decisions")->check(CLI::ExistingFile);
  rep->add_option("--store", rep_args.store, "Only this store");
  rep->add_option("--threshold", rep_args.threshold, "List apps with more flagged reviews than this");
  rep->add_option("--format", rep_args.format)->check(CLI::IsMember({"markdown", "csv"}));
  rep->add_option("--out", rep_args.out);
  rep->add_option("--distribution-out", rep_args.distribution_out, "Per-store distribution table");

  BundleArgs bun_args;
  auto* bun = app.add_subcommand("bundle", "Redacted evidence document for one app");
  add_inputs(bun, bun_args.in);
  bun->add_option("--app", bun_args.app)->required();
  bun->add_option("--store", bun_args.store)->required();
  bun->add_option("-k", bun_args.k, "Number of excerpts");
  bun->add_option("--out", bun_args.out)->required();

  ServeArgs srv_args;
  auto* srv = app.add_subcommand("serve", "Run the annotation API");
  srv->add_option("--bind", srv_args.bind);
  srv->add_option("--port", srv_args.port);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*import) cmd_import(g, import_args);
    else if (*expand) cmd_expand(g, expand_args);
    else if (*seed) cmd_seed_sample(g, seed_args);
    else if (*train) cmd_train(g, train_args);
    else if (*cv) cmd_cross_validate(g, cv_args);
    else if (*sel) cmd_al_select(g, sel_args);
    else if (*adv) cmd_al_advance(g, adv_args);
    else if (*cls) cmd_classify(g, cls_args);
    else if (*emo) cmd_emotions(g, emo_args);
    else if (*gen) cmd_gender(g, gen_args);
    else if (*rep) cmd_report(g, rep_args);
    else if (*bun) cmd_bundle(g, bun_args);
    else if (*srv) cmd_serve(g, srv_args);
  } catch (const harass::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
