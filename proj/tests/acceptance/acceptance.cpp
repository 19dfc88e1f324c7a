// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

// End-to-end acceptance checks. One PASS/FAIL line per criterion; exits
// nonzero if any fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>

#include "harass/active_learning.hpp"
#include "harass/corpus.hpp"
#include "harass/emotion.hpp"
#include "harass/error.hpp"
#include "harass/evaluation.hpp"
#include "harass/gender.hpp"
#include "harass/lexicon.hpp"
#include "harass/report.hpp"
#include "harass/rng.hpp"
#include "synth.hpp"

namespace {

using harass::Head;
using harass::LabelSet;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// --- recall-target pipeline --------------------------------------------------

Outcome recall_pipeline() {
  Outcome out;
  const auto data = synth::planted(2000, 0.10, 2024);
  harass::TrainConfig cfg;
  cfg.folds = 5;
  cfg.epochs = 5;
  cfg.rng_seed = 42;
  const auto start = std::chrono::steady_clock::now();
  const auto cv = harass::cross_validate(data, cfg, harass::RecallTargets{0.90, 0.85});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rm = cv.mean.menacing.recall.value_or(0.0);
  const double rp = cv.mean.profiling.recall.value_or(0.0);
  out.require(cv.folds.size() == 5, "expected 5 folds");
  out.require(rm >= 0.90, fmt::format("menacing recall {:.4f} < 0.90", rm));
  out.require(rp >= 0.85, fmt::format("profiling recall {:.4f} < 0.85", rp));
  out.require(secs < 60.0, fmt::format("took {:.1f}s", secs));
  if (out.ok) out.detail = fmt::format("recall M {:.4f}, P {:.4f} in {:.1f}s", rm, rp, secs);
  return out;
}

// --- threshold exactness -----------------------------------------------------

// Largest t in [0,1] whose recall over `positives` reaches `target`, found by
// scanning every candidate (each positive score and the ceiling 1.0).
double scan_threshold(const std::vector<double>& positives, double target) {
  std::vector<double> candidates = positives;
  candidates.push_back(1.0);
  double best = -1.0;
  for (double t : candidates) {
    const auto hit = std::count_if(positives.begin(), positives.end(), [&](double s) { return s >= t; });
    const double recall = static_cast<double>(hit) / static_cast<double>(positives.size());
    if (recall >= target && t > best) best = t;
  }
  return best;
}

Outcome threshold_exactness() {
  Outcome out;
  harass::Rng rng(7);
  std::size_t violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 1 + rng.below(60);
    std::vector<harass::ScoredLabel> set(n);
    for (auto& s : set) {
      // Coarse grid so ties are common.
      s.prediction = {std::round(rng.uniform() * 20) / 20, std::round(rng.uniform() * 20) / 20};
      s.labels = {rng.uniform() < 0.5, rng.uniform() < 0.5};
    }
    set[0].labels = {true, true};
    const harass::RecallTargets targets{std::round(rng.uniform() * 100) / 100,
                                        std::round(rng.uniform() * 100) / 100};
    const auto sel = harass::select_thresholds(set, targets);
    for (Head h : harass::kHeads) {
      std::vector<double> pos;
      for (const auto& s : set) {
        if (s.labels.at(h)) pos.push_back(s.prediction.at(h));
      }
      if (sel.thresholds.at(h) != scan_threshold(pos, targets.at(h))) ++violations;
    }
  }
  out.require(violations == 0, fmt::format("{} violations", violations));
  if (out.ok) out.detail = "500 sets, 0 violations";
  return out;
}

// --- stratification ----------------------------------------------------------

Outcome stratification() {
  Outcome out;
  harass::Rng rng(11);
  for (int trial = 0; trial < 200 && out.ok; ++trial) {
    std::vector<harass::LabeledReview> data(10 + rng.below(200));
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i].review.review_id = fmt::format("s{}", i);
      data[i].labels = synth::joint(static_cast<int>(rng.below(4)));
    }
    const std::size_t k = 2 + rng.below(std::min<std::size_t>(data.size() - 1, 9));
    const auto folds = harass::stratified_kfold(data, k, rng.below(1u << 30));
    out.require(folds.size() == k, "wrong fold count");
    std::vector<std::size_t> all;
    for (const auto& f : folds) all.insert(all.end(), f.begin(), f.end());
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(data.size());
    std::iota(expect.begin(), expect.end(), 0);
    out.require(all == expect, fmt::format("trial {}: fold union differs from input", trial));
    for (int cls = 0; cls < 4; ++cls) {
      std::size_t lo = SIZE_MAX;
      std::size_t hi = 0;
      for (const auto& f : folds) {
        const auto c = static_cast<std::size_t>(std::count_if(f.begin(), f.end(), [&](std::size_t i) {
          return static_cast<int>(data[i].labels.joint()) == cls;
        }));
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      out.require(hi - lo <= 1, fmt::format("trial {}: class {} spread {}", trial, cls, hi - lo));
    }
  }
  if (out.ok) out.detail = "200 sets balanced, unions exact";
  return out;
}

// --- kappa -------------------------------------------------------------------

std::optional<double> table_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  double n[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < a.size(); ++i) n[a[i] ? 1 : 0][b[i] ? 1 : 0] += 1;
  const double total = static_cast<double>(a.size());
  const double po = (n[0][0] + n[1][1]) / total;
  const double a1 = (n[1][0] + n[1][1]) / total;
  const double b1 = (n[0][1] + n[1][1]) / total;
  const double pe = a1 * b1 + (1 - a1) * (1 - b1);
  if (pe == 1.0) return std::nullopt;
  return (po - pe) / (1 - pe);
}

Outcome kappa_oracle() {
  Outcome out;
  harass::Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.below(40);
    const double pa = rng.uniform();
    const double pb = rng.uniform();
    std::vector<bool> a(n);
    std::vector<bool> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform() < pa;
      b[i] = rng.uniform() < pb;
    }
    const auto expect = table_kappa(a, b);
    try {
      const double got = harass::cohens_kappa(a, b);
      out.require(expect && std::abs(got - *expect) <= 1e-9, fmt::format("trial {} mismatch", trial));
    } catch (const harass::UndefinedKappaError&) {
      out.require(!expect, fmt::format("trial {}: undefined only in module", trial));
    }
  }
  const std::vector<bool> A = {true, true, true, false, false, false, false, false, false, false};
  const std::vector<bool> B = {true, true, false, false, false, false, false, false, false, true};
  const double hand = harass::cohens_kappa(A, B);
  out.require(std::abs(hand - 0.5238) <= 1e-4, fmt::format("hand case {:.6f}", hand));
  out.require(harass::cohens_kappa(A, A) == 1.0, "identical vectors not 1.0");
  if (out.ok) out.detail = fmt::format("1000 pairs match, hand case {:.4f}", hand);
  return out;
}

// --- active learning ---------------------------------------------------------

Outcome active_learning() {
  Outcome out;
  harass::ALConfig cfg;
  cfg.train.hash_dims = 1 << 14;
  cfg.train.epochs = 3;
  cfg.train.folds = 3;
  cfg.batch_size = 20;
  cfg.rounds_total = 3;
  std::vector<harass::Review> unlabeled;
  for (auto& lr : synth::planted(300, 0.0, 31)) {
    lr.review.review_id = "u" + lr.review.review_id;
    unlabeled.push_back(lr.review);
  }
  auto state = harass::ALState::bootstrap(synth::planted(200, 0.05, 30), unlabeled, cfg);
  const auto& lex = harass::default_harassment_lexicon();
  const auto& model = *state.model;

  harass::Rng rng(17);
  const auto& words = synth::filler();
  const auto& lex_words = lex.entries();
  for (int pool_no = 0; pool_no < 100 && out.ok; ++pool_no) {
    harass::ALState pool = state;
    pool.unlabeled_pool.clear();
    const auto n = 5 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) {
      std::string text;
      const auto len = 2 + rng.below(10);
      for (std::size_t t = 0; t < len; ++t) {
        if (!text.empty()) text += ' ';
        const double u = rng.uniform();
        if (u < 0.1) text += lex_words[rng.below(lex_words.size())];
        else if (u < 0.25) text += synth::kMenacingWords[rng.below(synth::kMenacingWords.size())];
        else if (u < 0.4) text += synth::kProfilingWords[rng.below(synth::kProfilingWords.size())];
        else text += words[rng.below(words.size())];
      }
      harass::Review r;
      r.review_id = fmt::format("p{:03d}", i);
      r.app_id = "app";
      r.text = text;
      pool.unlabeled_pool.push_back(r);
    }
    const auto k = 1 + rng.below(n);
    const auto sel = harass::select_batch(pool, k, lex);
    std::set<std::string> chosen;
    double min_chosen = 2.0;
    for (const auto& t : sel.tasks) {
      chosen.insert(t.review_ref.review_id);
      min_chosen = std::min(min_chosen, t.uncertainty());
      out.require(!lex.matches_any(t.snapshot_text),
                  fmt::format("pool {}: keyword review {} selected", pool_no, t.review_ref.review_id));
    }
    std::size_t eligible = 0;
    for (const auto& r : pool.unlabeled_pool) {
      if (lex.matches_any(r.text)) continue;
      ++eligible;
      if (chosen.contains(r.review_id)) continue;
      const double u = harass::uncertainty(model.predict(r.text));
      out.require(u <= min_chosen, fmt::format("pool {}: unselected {} more uncertain", pool_no, r.review_id));
    }
    out.require(sel.tasks.size() == std::min<std::size_t>(k, eligible),
                fmt::format("pool {}: batch size {}", pool_no, sel.tasks.size()));
  }

  // Three rounds run; a fourth is refused.
  const harass::KeywordLexicon none("none", {"zzzz"});
  std::size_t rounds = 0;
  for (int r = 0; r < 3; ++r) {
    auto batch = harass::select_batch(state, state.batch_size, none).tasks;
    for (auto& t : batch) {
      const auto truth = LabelSet{t.snapshot_text.find("nudes") != std::string::npos, false};
      t = harass::submit_label(harass::submit_label(t, "a", truth), "b", truth);
    }
    state = harass::run_round(std::move(state), batch).state;
    ++rounds;
  }
  bool refused = false;
  try {
    (void)harass::run_round(state, {});
  } catch (const harass::StateError&) {
    refused = true;
  }
  out.require(rounds == 3 && state.round_index == 3, "three rounds did not complete");
  out.require(refused, "fourth round accepted");
  if (out.ok) out.detail = "100 pools dominated, keywords excluded, 3 rounds then refused";
  return out;
}

// --- table reproduction ------------------------------------------------------

Outcome table_reproduction() {
  Outcome out;
  const auto rows = harass::load_table_rows(std::filesystem::path(HARASS_DATA_DIR "/fixtures/flagged_apps.csv"));
  out.require(rows.size() == 48, fmt::format("{} fixture rows", rows.size()));
  for (const auto& row : rows) {
    const auto both = row.both();
    out.require(both >= 0, row.app_name + ": negative overlap");
    out.require(static_cast<long long>(row.menacing + row.profiling) - both ==
                    static_cast<long long>(row.total),
                row.app_name + ": union arithmetic");
  }
  const auto it = std::find_if(rows.begin(), rows.end(), [](const auto& r) {
    return r.app_name == "MeetMe" && r.store == harass::Store::Apple;
  });
  out.require(it != rows.end(), "MeetMe row missing");
  if (!out.ok) return out;
  const auto decisions = synth::decisions_for(*it, "meetme", 250);
  const harass::AppRecord app{"meetme", harass::Store::Apple, "MeetMe", "Social"};
  const auto rep = harass::aggregate_app(app, decisions);
  out.require(rep.total == 1684 && rep.menacing == 632 && rep.profiling == 1406 && rep.both == 354,
              fmt::format("MeetMe gave {}/{}/{}/{}", rep.total, rep.menacing, rep.profiling, rep.both));
  out.require(rep.subtypes == it->subtypes, "MeetMe subtypes differ");
  if (out.ok) out.detail = "48 rows consistent, MeetMe 1684 = 632 + 1406 - 354";
  return out;
}

// --- store distribution ------------------------------------------------------

Outcome distribution() {
  Outcome out;
  std::vector<std::pair<harass::Store, LabelSet>> cells;
  auto add = [&](std::size_t n, LabelSet l) {
    for (std::size_t i = 0; i < n; ++i) cells.emplace_back(harass::Store::Google, l);
  };
  add(698, {false, true});
  add(272, {true, false});
  add(30, {true, true});
  add(5000, {false, false});
  const auto d = harass::store_distribution(cells);
  const auto& g = d.stores.at(harass::Store::Google);
  const auto p = harass::format_percent(g.profiling_only);
  const auto m = harass::format_percent(g.menacing_only);
  const auto b = harass::format_percent(g.both);
  out.require(p == "69.8" && m == "27.2" && b == "3.0", fmt::format("rendered {}/{}/{}", p, m, b));
  const double sum = std::stod(p) + std::stod(m) + std::stod(b);
  out.require(fmt::format("{:.1f}", sum) == "100.0", fmt::format("sum {:.1f}", sum));
  const auto table = harass::render_distribution(d);
  out.require(table.find("| 69.8 | 27.2 | 3.0 |") != std::string::npos, "table text");
  if (out.ok) out.detail = "Google 69.8 / 27.2 / 3.0, sum 100.0";
  return out;
}

// --- flagging ----------------------------------------------------------------

Outcome flagging() {
  Outcome out;
  std::vector<harass::AppHarassmentReport> reps;
  for (std::size_t total : {50u, 51u, 500u, 501u}) {
    reps.push_back(harass::make_report({fmt::format("a{}", total), harass::Store::Google,
                                        fmt::format("App{}", total), ""},
                                       total, 0, 0));
  }
  auto names = [](const std::vector<harass::AppHarassmentReport>& v) {
    std::set<std::string> s;
    for (const auto& r : v) s.insert(r.app.name);
    return s;
  };
  out.require(names(harass::flag_apps(reps, harass::kReviewFlagThreshold)) ==
                  std::set<std::string>{"App51", "App500", "App501"},
              "review-level flags");
  out.require(names(harass::flag_apps(reps, harass::kTableThreshold)) == std::set<std::string>{"App501"},
              "table-level flags");
  out.require(!reps[0].flagged_50 && reps[1].flagged_50 && !reps[2].flagged_500 && reps[3].flagged_500,
              "report flag fields");
  if (out.ok) out.detail = "50 and 500 not flagged, 51 and 501 flagged";
  return out;
}

// --- eligibility -------------------------------------------------------------

Outcome eligibility() {
  Outcome out;
  const harass::CorpusConfig cfg;
  const std::string english = "this app is not safe and the people on it are creeps";
  harass::Corpus corpus;
  auto add = [&](const std::string& id, harass::Date d, int rating) {
    harass::Review r;
    r.review_id = id;
    r.app_id = "app";
    r.store = harass::Store::Google;
    r.rating = rating;
    r.text = english;
    r.posted_date = d;
    corpus.insert(r);
  };
  add("old", harass::make_date(2019, 12, 31), 1);
  add("four", harass::make_date(2021, 5, 1), 4);
  add("five", harass::make_date(2021, 5, 1), 5);
  add("edge", harass::make_date(2020, 1, 1), 3);
  harass::Rng rng(3);
  std::size_t expect_in = 1;
  for (int i = 0; i < 300; ++i) {
    const auto d = harass::make_date(2019 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(12)),
                                     1 + static_cast<int>(rng.below(28)));
    const int rating = 1 + static_cast<int>(rng.below(5));
    add(fmt::format("r{}", i), d, rating);
    if (d >= harass::make_date(2020, 1, 1) && rating <= 3) ++expect_in;
  }
  std::set<std::string> in;
  for (const auto* r : corpus.eligible(cfg)) {
    in.insert(r->review_id);
    out.require(r->rating <= 3 && r->posted_date >= cfg.date_cutoff,
                fmt::format("{} should not be eligible", r->review_id));
  }
  out.require(!in.contains("old") && !in.contains("four") && !in.contains("five"), "boundary exclusions");
  out.require(in.contains("edge"), "2020-01-01 3-star review excluded");
  out.require(in.size() == expect_in, fmt::format("{} eligible, expected {}", in.size(), expect_in));
  if (out.ok) out.detail = fmt::format("{} of {} eligible, boundaries hold", in.size(), corpus.size());
  return out;
}

// --- gradient check ----------------------------------------------------------

Outcome gradient_check() {
  Outcome out;
  harass::Rng rng(99);
  constexpr std::size_t dims = 16;
  constexpr double h = 1e-5;
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a) + std::abs(b), 1e-8); };
  for (int instance = 0; instance < 20; ++instance) {
    harass::HeadWeights head;
    head.weights.resize(dims);
    for (auto& w : head.weights) w = rng.uniform() * 2.0 - 1.0;
    head.bias = rng.uniform() - 0.5;
    std::vector<harass::LogisticExample> ex(3 + rng.below(6));
    for (auto& e : ex) {
      for (std::uint32_t j = 0; j < dims; ++j) {
        if (rng.uniform() < 0.3) {
          e.x.indices.push_back(j);
          e.x.values.push_back(rng.uniform() * 2.0 - 1.0);
        }
      }
      e.y = rng.uniform() < 0.5 ? 1.0 : 0.0;
      e.weight = e.y > 0 ? 1.0 + rng.uniform() : 1.0;
    }
    const double l2 = rng.uniform() * 0.1;
    std::vector<double> gw;
    double gb = 0.0;
    harass::logistic_gradient(head, ex, l2, gw, gb);
    for (std::size_t j = 0; j <= dims; ++j) {
      auto plus = head;
      auto minus = head;
      (j < dims ? plus.weights[j] : plus.bias) += h;
      (j < dims ? minus.weights[j] : minus.bias) -= h;
      const double fd = (harass::logistic_loss(plus, ex, l2) - harass::logistic_loss(minus, ex, l2)) / (2 * h);
      worst = std::max(worst, rel(j < dims ? gw[j] : gb, fd));
    }
  }
  out.require(worst < 1e-5, fmt::format("max relative error {:.2e}", worst));
  if (out.ok) out.detail = fmt::format("20 instances, max relative error {:.2e}", worst);
  return out;
}

// --- gender and emotion ------------------------------------------------------

std::vector<std::pair<harass::Review, LabelSet>> gendered(std::size_t female, std::size_t male,
                                                         std::size_t unknown, LabelSet label,
                                                         harass::Rng& rng, const std::string& tag) {
  std::vector<std::pair<harass::Review, LabelSet>> out;
  auto add = [&](harass::Gender g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      harass::Review r;
      r.review_id = fmt::format("{}-{}", tag, out.size());
      r.app_id = "app";
      r.text = synth::gender_text(g, rng);
      out.emplace_back(r, label);
    }
  };
  add(harass::Gender::Female, female);
  add(harass::Gender::Male, male);
  add(harass::Gender::Unknown, unknown);
  return out;
}

Outcome gender_emotion() {
  Outcome out;
  harass::Rng rng(58);
  // Through text extraction.
  auto decisions = gendered(58, 42, 30, {true, false}, rng, "m");
  const auto prof = gendered(68, 32, 10, {false, true}, rng, "p");
  decisions.insert(decisions.end(), prof.begin(), prof.end());
  const auto g = harass::gender_report(decisions);
  out.require(g.menacing.female == 0.58 && g.menacing.male == 0.42,
              fmt::format("menacing split {}/{}", g.menacing.female.value_or(-1), g.menacing.male.value_or(-1)));
  out.require(g.profiling.female == 0.68 && g.profiling.male == 0.32,
              fmt::format("profiling split {}/{}", g.profiling.female.value_or(-1), g.profiling.male.value_or(-1)));
  out.require(g.menacing.tagged == 100 && g.menacing.total == 130, "menacing coverage");

  // At the published counts.
  std::vector<std::pair<harass::Gender, LabelSet>> counts;
  auto put = [&](harass::Gender gd, std::size_t n, LabelSet l) {
    for (std::size_t i = 0; i < n; ++i) counts.emplace_back(gd, l);
  };
  put(harass::Gender::Female, 4685, {true, false});
  put(harass::Gender::Male, 3393, {true, false});
  put(harass::Gender::Female, 7059, {false, true});
  put(harass::Gender::Male, 3322, {false, true});
  const auto big = harass::gender_distribution(counts);
  auto pct = [](std::optional<double> v) { return static_cast<int>(std::lround(v.value_or(-1) * 100)); };
  out.require(pct(big.menacing.female) == 58 && pct(big.menacing.male) == 42, "8078-review menacing split");
  out.require(pct(big.profiling.female) == 68 && pct(big.profiling.male) == 32, "10381-review profiling split");
  out.require(pct(big.male_menacing) == 51 && pct(big.female_profiling) == 60, "per-gender conditioning");

  // Emotion proportions.
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<harass::Emotion, std::string>> items;
    const auto n = 1 + rng.below(300);
    for (std::size_t i = 0; i < n; ++i) {
      items.emplace_back(harass::kAllEmotions[rng.below(harass::kAllEmotions.size())],
                         rng.uniform() < 0.5 ? "menacing" : "profiling");
    }
    for (const auto& [group, props] : harass::emotion_distribution(items)) {
      const double s = std::accumulate(props.begin(), props.end(), 0.0);
      out.require(std::abs(s - 1.0) <= 1e-9, fmt::format("trial {} group {} sums to {}", trial, group, s));
    }
  }
  if (out.ok) out.detail = "58/42 and 68/32 recovered, emotion groups sum to 1";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"recall-target pipeline", recall_pipeline},
      {"threshold selection exactness", threshold_exactness},
      {"stratification", stratification},
      {"cohen's kappa oracle", kappa_oracle},
      {"active-learning selection dominance", active_learning},
      {"per-app table reproduction", table_reproduction},
      {"store distribution reproduction", distribution},
      {"flagging boundaries", flagging},
      {"eligibility", eligibility},
      {"gradient check", gradient_check},
      {"gender/emotion aggregation", gender_emotion},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = fmt::format("threw: {}", e.what());
    }
    failed += o.ok ? 0 : 1;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << " (" << o.detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
