// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#include "harass/csv.hpp"

namespace harass {

std::optional<CsvRecord> CsvReader::next() {
  using traits = std::char_traits<char>;
  CsvRecord rec;
  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted field
  bool any = false;

  while (true) {
    const int ch = in_.get();
    if (ch == traits::eof()) {
      if (!any) return std::nullopt;
      if (in_quotes) rec.well_formed = false;
      rec.fields.push_back(std::move(field));
      return rec;
    }
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && in_.peek() == '\n') in_.get();
      rec.fields.push_back(std::move(field));
      return rec;
    } else if (c == '"' && field.empty() && !after_quote) {
      in_quotes = true;
    } else {
      if (after_quote) rec.well_formed = false;
      field.push_back(c);
    }
  }
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(std::span<const std::string> fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out += "\r\n";
  return out;
}

}  // namespace harass
