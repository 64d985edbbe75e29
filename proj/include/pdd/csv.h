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

#ifndef PDD_CSV_H_
#define PDD_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace pdd {

// Minimal RFC 4180 reader: comma separated, '"' quoting with "" escapes,
// quoted fields may span lines. Accepts \n and \r\n line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream &in) : in_(in) {}

  // Reads the next record into |fields|. Returns false at end of input.
  // Throws DataError on an unterminated quoted field.
  bool Next(std::vector<std::string> *fields);

  // 1-based physical line number where the last returned record started.
  int line() const { return record_line_; }

 private:
  std::istream &in_;
  int next_line_ = 1;
  int record_line_ = 0;
};

// Quotes |field| when it contains a comma, quote, or line break.
std::string CsvEscape(std::string_view field);

// Writes one CSV line terminated by '\n'.
void WriteCsvRow(std::ostream &out, const std::vector<std::string> &fields);

}  // namespace pdd

#endif  // PDD_CSV_H_
