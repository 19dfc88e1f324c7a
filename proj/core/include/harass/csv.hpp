// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace harass {

struct CsvRecord {
  std::vector<std::string> fields;
  /// False when the record ran into end-of-input inside a quoted field or a
  /// quoted field was followed by stray characters.
  bool well_formed = true;
};

/// RFC-4180 reader: comma separated, `"` quoting with `""` escapes, CRLF or LF
/// line endings, quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  std::optional<CsvRecord> next();

 private:
  std::istream& in_;
};

/// Quotes a field when it holds a comma, quote, CR or LF.
std::string csv_escape(std::string_view field);
/// Joins escaped fields with commas and terminates with CRLF.
std::string csv_row(std::span<const std::string> fields);

}  // namespace harass
