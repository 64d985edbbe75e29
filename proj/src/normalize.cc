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

#include "pdd/normalize.h"

#include <cctype>

#include "pdd/errors.h"

namespace pdd {

namespace {

bool IsSeparator(char c) {
  switch (c) {
    case '(':
    case ')':
    case ',':
    case '/':
    case ';':
    case '+':
    case '-':
    case '<':
    case '>':
      return true;
    default:
      return std::isspace(static_cast<unsigned char>(c)) != 0;
  }
}

}  // namespace

std::string TokenizedName::Joined() const {
  std::string out;
  for (const std::string &token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view TrimWhitespace(std::string_view s) {
  size_t begin = 0;
  while (begin < s.size() && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  size_t end = s.size();
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

TokenizedName TokenizeName(std::string_view raw) {
  TokenizedName name;
  name.raw = std::string(raw);
  std::string current;
  for (char c : raw) {
    if (IsSeparator(c)) {
      if (!current.empty()) name.tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  if (!current.empty()) name.tokens.push_back(std::move(current));
  return name;
}

std::string NormalizeIcd9(std::string_view raw) {
  std::string code;
  for (char c : TrimWhitespace(raw)) {
    if (c == '.') continue;
    code.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
  }
  if (code.empty()) {
    throw DataError("invalid ICD-9 code '" + std::string(raw) + "'");
  }
  return code;
}

std::string DottedIcd9(std::string_view normalized) {
  size_t head = (!normalized.empty() && normalized[0] == 'E') ? 4 : 3;
  if (normalized.size() <= head) return std::string(normalized);
  std::string out(normalized.substr(0, head));
  out.push_back('.');
  out += normalized.substr(head);
  return out;
}

}  // namespace pdd
