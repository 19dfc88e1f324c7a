// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/config.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "harass/error.hpp"

namespace harass {

namespace pt = boost::property_tree;

namespace {

template <typename T>
void read(const pt::ptree& section, const std::string& where, const std::string& key, T& out) {
  const auto v = section.get_optional<std::string>(key);
  if (!v) return;
  try {
    out = section.get<T>(key);
  } catch (const pt::ptree_error&) {
    throw DomainError(fmt::format("config {}.{}: bad value '{}'", where, key, *v));
  }
}

void read_path(const pt::ptree& section, const std::string& key, const std::filesystem::path& base,
               std::filesystem::path& out) {
  if (const auto v = section.get_optional<std::string>(key)) {
    std::filesystem::path p(*v);
    out = (p.is_relative() && !base.empty()) ? base / p : p;
  }
}

void check_keys(const pt::ptree& section, const std::string& name, std::set<std::string> allowed) {
  for (const auto& [key, _] : section) {
    if (!allowed.contains(key)) throw UsageError(fmt::format("config: unknown key {}.{}", name, key));
  }
}

}  // namespace

void PipelineConfig::validate() const {
  corpus.validate();
  train.validate();
  targets.validate();
  if (rounds_total == 0) throw DomainError("rounds_total must be >= 1");
  if (batch_size == 0) throw DomainError("batch_size must be >= 1");
  if (annotators_per_task < 1 || annotators_per_task > 2) {
    throw DomainError("annotators_per_task must be 1 or 2");
  }
  if (service.port < 0 || service.port > 65535) throw DomainError("service port out of range");
}

PipelineConfig PipelineConfig::parse(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  PipelineConfig c;
  for (const auto& [name, section] : tree) {
    if (name == "paths") {
      check_keys(section, name, {"state_dir", "lexicon", "subtypes", "emotions", "gender_terms", "apps"});
      read_path(section, "state_dir", base_dir, c.paths.state_dir);
      read_path(section, "lexicon", base_dir, c.paths.lexicon);
      read_path(section, "subtypes", base_dir, c.paths.subtypes);
      read_path(section, "emotions", base_dir, c.paths.emotions);
      read_path(section, "gender_terms", base_dir, c.paths.gender_terms);
      read_path(section, "apps", base_dir, c.paths.apps);
    } else if (name == "corpus") {
      check_keys(section, name, {"date_cutoff", "language_filter", "stopword_hit_min"});
      if (const auto d = section.get_optional<std::string>("date_cutoff")) {
        const auto date = parse_iso_date(*d);
        if (!date) throw DomainError("config corpus.date_cutoff: expected YYYY-MM-DD");
        c.corpus.date_cutoff = *date;
      }
      if (const auto f = section.get_optional<std::string>("language_filter")) {
        if (*f == "english") c.corpus.language_filter = LanguageFilter::EnglishOnly;
        else if (*f == "off") c.corpus.language_filter = LanguageFilter::Off;
        else throw DomainError("config corpus.language_filter: expected english or off");
      }
      read(section, name, "stopword_hit_min", c.corpus.english_stopword_hit_min);
    } else if (name == "train") {
      check_keys(section, name, {"epochs", "folds", "learning_rate", "lr_decay_power", "l2_penalty",
                                 "hash_dims", "rng_seed", "positive_class_weight"});
      read(section, name, "epochs", c.train.epochs);
      read(section, name, "folds", c.train.folds);
      read(section, name, "learning_rate", c.train.learning_rate);
      read(section, name, "lr_decay_power", c.train.lr_decay_power);
      read(section, name, "l2_penalty", c.train.l2_penalty);
      read(section, name, "hash_dims", c.train.hash_dims);
      read(section, name, "rng_seed", c.train.rng_seed);
      read(section, name, "positive_class_weight", c.train.positive_class_weight);
    } else if (name == "thresholds") {
      check_keys(section, name, {"recall_menacing", "recall_profiling", "flag_reviews", "flag_table"});
      read(section, name, "recall_menacing", c.targets.menacing);
      read(section, name, "recall_profiling", c.targets.profiling);
      read(section, name, "flag_reviews", c.flag_reviews);
      read(section, name, "flag_table", c.flag_table);
    } else if (name == "active_learning") {
      check_keys(section, name, {"rounds_total", "batch_size", "annotators_per_task"});
      read(section, name, "rounds_total", c.rounds_total);
      read(section, name, "batch_size", c.batch_size);
      read(section, name, "annotators_per_task", c.annotators_per_task);
    } else if (name == "service") {
      check_keys(section, name, {"bind", "port"});
      read(section, name, "bind", c.service.bind);
      read(section, name, "port", c.service.port);
    } else if (name == "tokens") {
      for (const auto& [annotator, token] : section) {
        const auto t = token.get_value<std::string>();
        if (t.empty()) throw DomainError(fmt::format("config: empty token for {}", annotator));
        if (!c.service.tokens.emplace(t, annotator).second) {
          throw DomainError("config: a token is shared by two annotators");
        }
      }
    } else {
      throw UsageError(fmt::format("config: unknown section [{}]", name));
    }
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse(in, path.parent_path());
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"folds", c.folds},
          {"learning_rate", c.learning_rate},
          {"lr_decay_power", c.lr_decay_power},
          {"l2_penalty", c.l2_penalty},
          {"hash_dims", c.hash_dims},
          {"rng_seed", c.rng_seed},
          {"positive_class_weight", c.positive_class_weight}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.epochs = j.at("epochs").get<std::size_t>();
    c.folds = j.at("folds").get<std::size_t>();
    c.learning_rate = j.at("learning_rate").get<double>();
    c.lr_decay_power = j.at("lr_decay_power").get<double>();
    c.l2_penalty = j.at("l2_penalty").get<double>();
    c.hash_dims = j.at("hash_dims").get<std::size_t>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.positive_class_weight = j.at("positive_class_weight").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("train config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const PipelineConfig& c) {
  return {{"paths",
           {{"state_dir", c.paths.state_dir.string()},
            {"lexicon", c.paths.lexicon.string()},
            {"subtypes", c.paths.subtypes.string()},
            {"emotions", c.paths.emotions.string()},
            {"gender_terms", c.paths.gender_terms.string()},
            {"apps", c.paths.apps.string()}}},
          {"corpus",
           {{"date_cutoff", format_iso_date(c.corpus.date_cutoff)},
            {"language_filter",
             c.corpus.language_filter == LanguageFilter::EnglishOnly ? "english" : "off"},
            {"stopword_hit_min", c.corpus.english_stopword_hit_min}}},
          {"train", to_json(c.train)},
          {"thresholds",
           {{"recall_menacing", c.targets.menacing},
            {"recall_profiling", c.targets.profiling},
            {"flag_reviews", c.flag_reviews},
            {"flag_table", c.flag_table}}},
          {"active_learning",
           {{"rounds_total", c.rounds_total},
            {"batch_size", c.batch_size},
            {"annotators_per_task", c.annotators_per_task}}},
          {"service", {{"bind", c.service.bind}, {"port", c.service.port}}}};
}

}  // namespace harass
