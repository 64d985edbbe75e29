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

#include "pdd/csv.h"

#include "pdd/errors.h"

namespace pdd {

bool CsvReader::Next(std::vector<std::string> *fields) {
  fields->clear();
  int c = in_.get();
  if (c == std::char_traits<char>::eof()) return false;
  record_line_ = next_line_;

  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  while (true) {
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw DataError("unterminated quoted field starting on line " +
                        std::to_string(record_line_));
      }
      fields->push_back(std::move(field));
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++next_line_;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (ch == ',') {
      fields->push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && in_.peek() == '\n') in_.get();
      ++next_line_;
      fields->push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
    c = in_.get();
  }
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(fields[i]);
  }
  out << '\n';
}

}  // namespace pdd
