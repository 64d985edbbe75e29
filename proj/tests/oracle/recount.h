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

// Dataset statistics recounted straight from the raw input files, sharing no
// code with the loaders or the graph builder.

#ifndef PDD_TESTS_ORACLE_RECOUNT_H_
#define PDD_TESTS_ORACLE_RECOUNT_H_

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdd/eval.h"

namespace pdd::oracle {

// Whole-file CSV split: quoted fields, doubled quotes, CRLF tolerated.
inline std::vector<std::vector<std::string>> ReadCsvRows(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      rows.push_back(row);
      row.clear();
      field.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) {
    row.push_back(field);
    rows.push_back(row);
  }
  return rows;
}

inline std::string Trim(const std::string &s) {
  size_t b = s.find_first_not_of(" \t\r\n"), e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

inline std::string CodeKey(const std::string &raw) {
  std::string out;
  for (char c : Trim(raw)) {
    if (c != '.') out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return out;
}

// |linked_mentions| names the raw drug strings the linker linked. Assumes
// the files are well formed (as the generator writes them).
inline DatasetStatistics RecountStatistics(const std::filesystem::path &dir,
                                           const std::set<std::string> &linked_mentions) {
  DatasetStatistics s;
  auto patients = ReadCsvRows(dir / "patients.csv");
  std::map<std::string, std::map<std::string, std::string>> attrs;
  for (size_t r = 1; r < patients.size(); ++r) {
    std::string id = Trim(patients[r][0]);
    if (id.empty()) continue;
    auto &a = attrs[id];
    for (size_t c = 1; c < patients[r].size(); ++c) {
      if (!patients[r][c].empty()) a[patients[0][c]] = patients[r][c];
    }
  }
  s.patients = attrs.size();
  for (const auto &[id, a] : attrs) s.demographics_triples += a.size();

  std::set<std::string> linked_drugs;
  for (const auto &m : linked_mentions) linked_drugs.insert(Lower(m));
  std::set<std::string> drugs;
  std::set<std::pair<std::string, std::string>> patient_drug;
  auto rx = ReadCsvRows(dir / "prescriptions.csv");
  for (size_t r = 1; r < rx.size(); ++r) {
    std::string drug = Lower(Trim(rx[r][1]));
    drugs.insert(drug);
    patient_drug.emplace(Trim(rx[r][0]), drug);
  }
  s.drugs_total = drugs.size();
  for (const auto &d : drugs) s.drugs_linked += linked_drugs.count(d);
  s.patient_drug_triples = patient_drug.size();
  for (const auto &[p, d] : patient_drug) s.patient_drug_linked += linked_drugs.count(d);

  std::set<std::string> ontology;
  std::ifstream onto(dir / "icd9_ontology.json");
  for (const auto &item : nlohmann::json::parse(onto)) {
    ontology.insert(CodeKey(item.at("code").get<std::string>()));
  }
  std::set<std::string> codes;
  std::set<std::pair<std::string, std::string>> patient_code;
  auto dx = ReadCsvRows(dir / "diagnoses.csv");
  for (size_t r = 1; r < dx.size(); ++r) {
    codes.insert(CodeKey(dx[r][1]));
    patient_code.emplace(Trim(dx[r][0]), CodeKey(dx[r][1]));
  }
  s.diseases_total = codes.size();
  for (const auto &c : codes) s.diseases_linked += ontology.count(c);
  s.patient_disease_triples = patient_code.size();
  for (const auto &[p, c] : patient_code) s.patient_disease_linked += ontology.count(c);
  return s;
}

}  // namespace pdd::oracle

#endif  // PDD_TESTS_ORACLE_RECOUNT_H_
