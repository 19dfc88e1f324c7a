// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/gender.hpp"

#include <fmt/format.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {

namespace {

// Keep in sync with data/lexicons/gender.txt.
constexpr std::string_view kDefaultTerms = R"(# Gendered nouns and pronouns used to tag the abuser.
[Male]
guy
guys
man
men
he
him
his
himself
dude
dudes
boy
boys
male
males
husband
boyfriend

[Female]
girl
girls
woman
women
she
her
hers
herself
lady
ladies
female
females
wife
girlfriend
)";

// Marker phrases that open a self-description.
const std::vector<std::vector<std::string_view>>& self_markers() {
  static const std::vector<std::vector<std::string_view>> m = {
      {"i", "m"}, {"i", "am"}, {"im"}, {"as", "a"}, {"as", "an"}};
  return m;
}

std::optional<double> share(std::size_t part, std::size_t whole) {
  if (whole == 0) return std::nullopt;
  return static_cast<double>(part) / static_cast<double>(whole);
}

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::Male:
      return "male";
    case Gender::Female:
      return "female";
    case Gender::Unknown:
      return "unknown";
  }
  return "?";
}

GenderTerms GenderTerms::parse(std::istream& in) {
  GenderTerms t;
  std::set<std::string>* current = nullptr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = to_lower_ascii(trim(line.substr(0, line.find('#'))));
    if (body.empty()) continue;
    if (body == "[male]") {
      current = &t.male;
    } else if (body == "[female]") {
      current = &t.female;
    } else if (body.front() == '[') {
      throw SchemaError(fmt::format("gender terms line {}: unknown section {}", lineno, body));
    } else if (!current) {
      throw SchemaError(fmt::format("gender terms line {}: entry before any section", lineno));
    } else if (tokenize(body).size() != 1) {
      throw SchemaError(fmt::format("gender terms line {}: '{}' is not a single word", lineno, body));
    } else {
      current->insert(body);
    }
  }
  for (const auto& w : t.male) {
    if (t.female.contains(w)) throw SchemaError("gender term in both sections: " + w);
  }
  return t;
}

GenderTerms GenderTerms::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open gender terms " + path.string());
  return parse(in);
}

const GenderTerms& default_gender_terms() {
  static const GenderTerms terms = [] {
    std::istringstream in{std::string(kDefaultTerms)};
    return GenderTerms::parse(in);
  }();
  return terms;
}

GenderTag extract_abuser_gender(std::string_view text, const GenderTerms& terms) {
  const auto tokens = tokenize_with_offsets(text);
  GenderTag tag;
  // Index one past the last token of the current self-description window.
  std::size_t skip_until = 0;
  std::size_t skip_sentence = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    for (const auto& marker : self_markers()) {
      if (i + marker.size() > tokens.size()) continue;
      bool hit = true;
      for (std::size_t j = 0; j < marker.size() && hit; ++j) {
        hit = tokens[i + j].text == marker[j] && tokens[i + j].sentence == tok.sentence;
      }
      if (hit) {
        skip_until = std::max(skip_until, i + marker.size() + kSelfReferenceWindow);
        skip_sentence = tok.sentence;
      }
    }
    if (i < skip_until && tok.sentence == skip_sentence) continue;
    Gender g = Gender::Unknown;
    if (terms.male.contains(tok.text)) g = Gender::Male;
    else if (terms.female.contains(tok.text)) g = Gender::Female;
    if (g != Gender::Unknown) tag.evidence.push_back({tok.text, i, g});
  }
  bool male = false;
  bool female = false;
  for (const auto& e : tag.evidence) {
    male = male || e.gender == Gender::Male;
    female = female || e.gender == Gender::Female;
  }
  if (male != female) tag.gender = male ? Gender::Male : Gender::Female;
  return tag;
}

GenderDistribution gender_distribution(std::span<const std::pair<Gender, LabelSet>> tagged) {
  struct Counts {
    std::size_t male = 0, female = 0, total = 0;
  };
  Counts m, p;
  std::size_t male_m = 0, male_p = 0, female_m = 0, female_p = 0;
  for (const auto& [g, l] : tagged) {
    for (auto [flag, c] : {std::pair{l.menacing, &m}, std::pair{l.profiling, &p}}) {
      if (!flag) continue;
      ++c->total;
      if (g == Gender::Male) ++c->male;
      if (g == Gender::Female) ++c->female;
    }
    if (g == Gender::Male) {
      male_m += l.menacing;
      male_p += l.profiling;
    } else if (g == Gender::Female) {
      female_m += l.menacing;
      female_p += l.profiling;
    }
  }
  auto split = [](const Counts& c) {
    GenderSplit s;
    s.tagged = c.male + c.female;
    s.total = c.total;
    s.male = share(c.male, s.tagged);
    s.female = share(c.female, s.tagged);
    s.coverage = c.total == 0 ? 0.0 : static_cast<double>(s.tagged) / static_cast<double>(c.total);
    return s;
  };
  GenderDistribution d;
  d.menacing = split(m);
  d.profiling = split(p);
  d.male_menacing = share(male_m, male_m + male_p);
  d.male_profiling = share(male_p, male_m + male_p);
  d.female_menacing = share(female_m, female_m + female_p);
  d.female_profiling = share(female_p, female_m + female_p);
  return d;
}

GenderDistribution gender_distribution(std::span<const std::pair<GenderTag, LabelSet>> tagged) {
  std::vector<std::pair<Gender, LabelSet>> flat;
  flat.reserve(tagged.size());
  for (const auto& [t, l] : tagged) flat.emplace_back(t.gender, l);
  return gender_distribution(std::span<const std::pair<Gender, LabelSet>>(flat));
}

GenderDistribution gender_report(std::span<const std::pair<Review, LabelSet>> decisions,
                                 const GenderTerms& terms) {
  std::vector<std::pair<Gender, LabelSet>> tagged;
  for (const auto& [review, labels] : decisions) {
    if (labels.any()) tagged.emplace_back(extract_abuser_gender(review.text, terms).gender, labels);
  }
  return gender_distribution(std::span<const std::pair<Gender, LabelSet>>(tagged));
}

nlohmann::json to_json(const GenderDistribution& d) {
  auto split = [](const GenderSplit& s) {
    return nlohmann::json{{"male", opt(s.male)},
                          {"female", opt(s.female)},
                          {"tagged", s.tagged},
                          {"total", s.total},
                          {"coverage", s.coverage}};
  };
  return {{"by_head", {{"menacing", split(d.menacing)}, {"profiling", split(d.profiling)}}},
          {"by_gender",
           {{"male", {{"menacing", opt(d.male_menacing)}, {"profiling", opt(d.male_profiling)}}},
            {"female",
             {{"menacing", opt(d.female_menacing)}, {"profiling", opt(d.female_profiling)}}}}}};
}

nlohmann::json to_json(const GenderTag& t) {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : t.evidence) {
    ev.push_back({{"term", e.term}, {"token", e.token_offset}, {"gender", to_string(e.gender)}});
  }
  return {{"gender", to_string(t.gender)}, {"evidence", ev}};
}

}  // namespace harass
