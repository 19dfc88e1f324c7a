// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "harass/error.hpp"
#include "harass/text.hpp"

namespace harass {

double SparseVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

double SparseVector::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t i = 0; i < indices.size(); ++i) s += values[i] * dense[indices[i]];
  return s;
}

HashedFeature hash_feature(std::string_view feature, std::size_t hash_dims) {
  const auto h = fnv1a64(feature);
  return {static_cast<std::uint32_t>(h % hash_dims), (h >> 63) ? -1 : 1};
}

SparseVector hashed_ngram_counts(std::string_view text, std::size_t hash_dims) {
  if (hash_dims < 2) throw DomainError("hash_dims must be >= 2");
  const auto tokens = tokenize(text);

  std::vector<std::pair<std::uint32_t, double>> raw;
  raw.reserve(tokens.size() * 2);
  auto add = [&](std::string_view feature) {
    const auto f = hash_feature(feature, hash_dims);
    raw.emplace_back(f.bucket, static_cast<double>(f.sign));
  };
  std::string bigram;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (i + 1 < tokens.size()) {
      bigram.assign(tokens[i]).append(" ").append(tokens[i + 1]);
      add(bigram);
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  SparseVector out;
  for (const auto& [idx, v] : raw) {
    if (!out.indices.empty() && out.indices.back() == idx) {
      out.values.back() += v;
    } else {
      out.indices.push_back(idx);
      out.values.push_back(v);
    }
  }
  // Drop buckets whose signed contributions cancelled.
  std::size_t w = 0;
  for (std::size_t r = 0; r < out.indices.size(); ++r) {
    if (out.values[r] != 0.0) {
      out.indices[w] = out.indices[r];
      out.values[w] = out.values[r];
      ++w;
    }
  }
  out.indices.resize(w);
  out.values.resize(w);
  return out;
}

SparseVector featurize(std::string_view text, std::size_t hash_dims) {
  auto v = hashed_ngram_counts(text, hash_dims);
  const double n = v.norm();
  if (n > 0.0) {
    for (auto& x : v.values) x /= n;
  }
  return v;
}

}  // namespace harass
