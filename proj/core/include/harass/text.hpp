// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace harass {

/// A lowercase token and where it sits in the source text.
struct Token {
  std::string text;
  std::size_t byte_offset = 0;
  /// Index of the sentence the token belongs to (split on . ! ? and newlines).
  std::size_t sentence = 0;
};

/// Splits on anything that is not a letter or digit and lowercases ASCII.
/// Non-ASCII code points count as word characters unless they fall in a
/// punctuation or symbol block, so "I’m" splits like "I'm".
std::vector<Token> tokenize_with_offsets(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

std::string to_lower_ascii(std::string_view s);
std::string_view trim(std::string_view s);

/// Decodes UTF-8 leniently; invalid bytes become U+FFFD.
std::u32string decode_utf8(std::string_view s);

bool is_latin_letter(char32_t cp);
bool is_letter_like(char32_t cp);

/// 64-bit FNV-1a. Stable across platforms, used for feature hashing.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// Lowercase hex SHA-256 of `s`.
std::string sha256_hex(std::string_view s);

}  // namespace harass
