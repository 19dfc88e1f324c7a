// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

// Independent reference implementations used to check the library.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

/// Cohen's kappa from an explicit 2x2 table; nullopt when undefined.
inline std::optional<double> kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::array<std::array<double, 2>, 2> table{};
  for (std::size_t i = 0; i < a.size(); ++i) table[a[i]][b[i]] += 1.0;
  const double n = static_cast<double>(a.size());
  double agree = 0.0;
  double chance = 0.0;
  for (int c = 0; c < 2; ++c) {
    agree += table[c][c];
    const double row = table[c][0] + table[c][1];
    const double col = table[0][c] + table[1][c];
    chance += (row / n) * (col / n);
  }
  const double po = agree / n;
  if (chance >= 1.0) return std::nullopt;
  return (po - chance) / (1.0 - chance);
}

inline double recall_at(const std::vector<double>& positives, double t) {
  const auto hit = std::count_if(positives.begin(), positives.end(), [&](double s) { return s >= t; });
  return static_cast<double>(hit) / static_cast<double>(positives.size());
}

/// Brute force: of every candidate threshold (each score, 0 and 1) keep the
/// largest whose recall meets the target.
inline double largest_threshold(const std::vector<double>& positives,
                                const std::vector<double>& negatives, double target) {
  std::vector<double> candidates = {0.0, 1.0};
  candidates.insert(candidates.end(), positives.begin(), positives.end());
  candidates.insert(candidates.end(), negatives.begin(), negatives.end());
  double best = -1.0;
  for (double c : candidates) {
    if (recall_at(positives, c) >= target) best = std::max(best, c);
  }
  return best;
}

}  // namespace oracle
