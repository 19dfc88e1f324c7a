// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace harass {

using Date = std::chrono::year_month_day;

/// Strict `YYYY-MM-DD`. Returns nullopt for anything else, including
/// impossible calendar dates.
std::optional<Date> parse_iso_date(std::string_view s);
std::string format_iso_date(const Date& d);

constexpr Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

}  // namespace harass
