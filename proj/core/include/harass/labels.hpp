// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <array>
#include <cmath>
#include <string_view>

#include "harass/corpus.hpp"

namespace harass {

enum class Head { Menacing, Profiling };
inline constexpr std::array<Head, 2> kHeads = {Head::Menacing, Head::Profiling};

constexpr std::string_view to_string(Head h) {
  return h == Head::Menacing ? "menacing" : "profiling";
}

/// The 4-way class induced by the two heads.
enum class JointClass { Neither, MenacingOnly, ProfilingOnly, Both };
inline constexpr std::size_t kJointClassCount = 4;

std::string_view to_string(JointClass c);

struct LabelSet {
  bool menacing = false;
  bool profiling = false;

  constexpr bool at(Head h) const { return h == Head::Menacing ? menacing : profiling; }
  constexpr bool any() const { return menacing || profiling; }
  constexpr JointClass joint() const {
    if (menacing && profiling) return JointClass::Both;
    if (menacing) return JointClass::MenacingOnly;
    if (profiling) return JointClass::ProfilingOnly;
    return JointClass::Neither;
  }
  constexpr bool operator==(const LabelSet&) const = default;
};

struct Prediction {
  double p_menacing = 0.0;
  double p_profiling = 0.0;

  constexpr double at(Head h) const { return h == Head::Menacing ? p_menacing : p_profiling; }
  bool valid() const {
    return std::isfinite(p_menacing) && std::isfinite(p_profiling) && p_menacing >= 0.0 &&
           p_menacing <= 1.0 && p_profiling >= 0.0 && p_profiling <= 1.0;
  }
  constexpr bool operator==(const Prediction&) const = default;
};

struct LabeledReview {
  Review review;
  LabelSet labels;
};

}  // namespace harass
