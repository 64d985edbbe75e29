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

#ifndef PDD_RECORDS_H_
#define PDD_RECORDS_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace pdd {

struct Dosage {
  double value = 0.0;  // > 0
  std::string unit;

  bool operator==(const Dosage &other) const = default;
  auto operator<=>(const Dosage &other) const = default;
};

struct PatientRecord {
  std::string patient_id;
  // (attribute name, literal value) in column order.
  std::vector<std::pair<std::string, std::string>> demographics;

  bool operator==(const PatientRecord &other) const = default;
};

struct PrescriptionRecord {
  std::string patient_id;
  std::string drug_name_raw;
  std::optional<Dosage> dosage;

  bool operator==(const PrescriptionRecord &other) const = default;
};

struct DiagnosisRecord {
  std::string patient_id;
  std::string icd9_code_raw;

  bool operator==(const DiagnosisRecord &other) const = default;
};

struct DrugKbEntry {
  std::string kb_id;
  std::string canonical_name;
  std::vector<std::string> aliases;    // deduplicated, never the canonical name
  std::set<std::string> indications;   // normalized ICD-9 codes
  std::set<Dosage> standard_dosages;

  bool operator==(const DrugKbEntry &other) const = default;
};

struct Icd9Ontology {
  std::set<std::string> codes;               // normalized
  std::map<std::string, std::string> labels;  // normalized code -> label

  bool Contains(const std::string &normalized) const {
    return codes.count(normalized) > 0;
  }
};

// mention -> gold kb_id, or nullopt when the mention has no correct link.
using GoldLinks = std::map<std::string, std::optional<std::string>>;

}  // namespace pdd

#endif  // PDD_RECORDS_H_
