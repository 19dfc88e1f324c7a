// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace harass {

/// Sorted, duplicate-free sparse vector.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool empty() const { return indices.empty(); }
  std::size_t nnz() const { return indices.size(); }
  double norm() const;
  double dot(std::span<const double> dense) const;
};

struct HashedFeature {
  std::uint32_t bucket;
  int sign;
};

/// FNV-1a of the feature string; bucket from the hash modulo `hash_dims`,
/// sign from its top bit.
HashedFeature hash_feature(std::string_view feature, std::size_t hash_dims);

/// Signed unigram + bigram counts before normalization. Bigrams are keyed as
/// "left right".
SparseVector hashed_ngram_counts(std::string_view text, std::size_t hash_dims);

/// `hashed_ngram_counts` scaled to unit L2 norm; empty text (or features
/// that cancel out) gives the zero vector.
SparseVector featurize(std::string_view text, std::size_t hash_dims);

}  // namespace harass
