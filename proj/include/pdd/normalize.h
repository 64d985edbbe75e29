// Copyright 2026 The pdd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDD_NORMALIZE_H_
#define PDD_NORMALIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace pdd {

// A drug name split into lowercase words. The token count is the name length
// used by the translation model.
struct TokenizedName {
  std::vector<std::string> tokens;
  std::string raw;

  bool empty() const { return tokens.empty(); }
  size_t size() const { return tokens.size(); }

  // Tokens joined by single spaces.
  std::string Joined() const;

  bool operator==(const TokenizedName &other) const = default;
};

// Lowercases ASCII letters and splits on whitespace and on the separators
// ( ) , / ; + - < >. Separators are dropped. Digits stay attached to their
// unit suffix, so "200mg" and "5%" are single tokens. A whitespace-only input
// yields no tokens.
TokenizedName TokenizeName(std::string_view raw);

// Canonical dotless uppercase ICD-9 code: "995.92" -> "99592". Throws
// DataError when nothing is left after stripping.
std::string NormalizeIcd9(std::string_view raw);

// Inverse display form of a normalized code following the ICD-9 layout:
// three leading characters for numeric and V codes, four for E codes, the
// rest after a dot. "99592" -> "995.92", "E8809" -> "E880.9", "401" -> "401".
std::string DottedIcd9(std::string_view normalized);

// ASCII lowercase copy.
std::string AsciiLower(std::string_view s);

// Copy without leading and trailing ASCII whitespace.
std::string_view TrimWhitespace(std::string_view s);

}  // namespace pdd

#endif  // PDD_NORMALIZE_H_
