// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/features.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>

#include "harass/error.hpp"
#include "harass/rng.hpp"

namespace {

// Hand-rolled FNV-1a so the bucket assignment is checked independently.
std::pair<std::uint32_t, int> ref_hash(const std::string& s, std::size_t dims) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return {static_cast<std::uint32_t>(h % dims), (h >> 63) ? -1 : 1};
}

std::map<std::uint32_t, double> ref_counts(const std::vector<std::string>& feats, std::size_t dims) {
  std::map<std::uint32_t, double> m;
  for (const auto& f : feats) {
    const auto [b, s] = ref_hash(f, dims);
    m[b] += s;
  }
  std::erase_if(m, [](const auto& kv) { return kv.second == 0.0; });
  return m;
}

std::map<std::uint32_t, double> as_map(const harass::SparseVector& v) {
  std::map<std::uint32_t, double> m;
  for (std::size_t i = 0; i < v.nnz(); ++i) m[v.indices[i]] = v.values[i];
  return m;
}

}  // namespace

TEST(Features, EmptyTextIsZeroVector) {
  EXPECT_TRUE(harass::featurize("", 1024).empty());
  EXPECT_TRUE(harass::featurize("  ...  ", 1024).empty());
  EXPECT_EQ(harass::featurize("", 1024).norm(), 0.0);
}

TEST(Features, DimsBelowTwoRejected) {
  EXPECT_THROW(harass::featurize("scam", 1), harass::DomainError);
}

TEST(Features, NormIsZeroOrOne) {
  harass::Rng rng(3);
  const std::vector<std::string> words = {"scam", "app", "stalker", "the", "nudes", "ok", "bad"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const auto n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) text += words[rng.below(words.size())] + " ";
    const double norm = harass::featurize(text, 64).norm();
    EXPECT_TRUE(norm == 0.0 || std::abs(norm - 1.0) < 1e-9) << text << " -> " << norm;
  }
}

TEST(Features, HashedCountsMatchHandHash) {
  constexpr std::size_t dims = 8;
  const auto single = harass::hashed_ngram_counts("scam", dims);
  const auto twice = harass::hashed_ngram_counts("Scam scam", dims);
  EXPECT_EQ(as_map(single), ref_counts({"scam"}, dims));
  EXPECT_EQ(as_map(twice), ref_counts({"scam", "scam scam", "scam"}, dims));

  // The unigram bucket carries twice the weight in the repeated text.
  const auto [b, s] = ref_hash("scam", dims);
  EXPECT_DOUBLE_EQ(as_map(single).at(b), s);
  const auto [bb, bs] = ref_hash("scam scam", dims);
  const double expected = 2.0 * s + (bb == b ? bs : 0);
  EXPECT_DOUBLE_EQ(as_map(twice).at(b), expected);
}

TEST(Features, HashFeatureAgreesWithReference) {
  for (const std::string f : {"a", "scam", "fake profile", "sugar daddy", "x y"}) {
    for (std::size_t dims : {2u, 8u, 1024u, 262144u}) {
      const auto got = harass::hash_feature(f, dims);
      const auto [b, s] = ref_hash(f, dims);
      EXPECT_EQ(got.bucket, b);
      EXPECT_EQ(got.sign, s);
    }
  }
}

TEST(Features, CaseInsensitiveAndDeterministic) {
  const auto a = harass::featurize("He STALKED me", 4096);
  const auto b = harass::featurize("he stalked me", 4096);
  EXPECT_EQ(a.indices, b.indices);
  EXPECT_EQ(a.values, b.values);
}

TEST(Features, IndicesSortedAndInRange) {
  const auto v = harass::featurize("one two three four five six seven eight nine ten", 16);
  for (std::size_t i = 0; i < v.nnz(); ++i) {
    EXPECT_LT(v.indices[i], 16u);
    if (i > 0) {
      EXPECT_LT(v.indices[i - 1], v.indices[i]);
    }
  }
}
