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

#ifndef PDD_INGEST_H_
#define PDD_INGEST_H_

#include <filesystem>
#include <istream>
#include <set>
#include <string>
#include <vector>

#include "pdd/records.h"

namespace pdd {

// A row a loader refused, with the physical line it started on.
struct RowReject {
  int line = 0;
  std::string reason;

  bool operator==(const RowReject &other) const = default;
};

// Loader output. Every non-blank data row is accounted for:
// rows_in == records.size() + rejects.size() + merged.
template <typename Record>
struct LoadResult {
  std::vector<Record> records;
  std::vector<RowReject> rejects;
  size_t rows_in = 0;
  size_t merged = 0;  // duplicate keys folded into an earlier record

  bool operator==(const LoadResult &other) const = default;
};

// patients.csv: header "patient_id" plus free attribute columns. Repeated ids
// merge into the first record, later non-blank attribute values winning.
// Blank attribute cells produce no attribute.
LoadResult<PatientRecord> LoadPatients(const std::filesystem::path &path);
LoadResult<PatientRecord> ReadPatients(std::istream &in);

// prescriptions.csv: patient_id,drug_name,dosage_value,dosage_unit. Other
// columns such as a duration are ignored. A blank dosage_value means no
// dosage; a value without a unit, a malformed value, or a value <= 0 rejects
// the row.
LoadResult<PrescriptionRecord> LoadPrescriptions(
    const std::filesystem::path &path, const std::set<std::string> &patients);
LoadResult<PrescriptionRecord> ReadPrescriptions(
    std::istream &in, const std::set<std::string> &patients);

// diagnoses.csv: patient_id,icd9_code. The raw code is kept; codes that
// normalize to nothing are rejected.
LoadResult<DiagnosisRecord> LoadDiagnoses(const std::filesystem::path &path,
                                          const std::set<std::string> &patients);
LoadResult<DiagnosisRecord> ReadDiagnoses(std::istream &in,
                                          const std::set<std::string> &patients);

// drug_kb.json. Throws DataError on duplicate ids, empty names, bad dosages,
// or invalid indication codes.
std::vector<DrugKbEntry> LoadDrugKb(const std::filesystem::path &path);
std::vector<DrugKbEntry> ParseDrugKb(std::string_view json_text);

// icd9_ontology.json: array of {code, label}.
Icd9Ontology LoadIcd9Ontology(const std::filesystem::path &path);
Icd9Ontology ParseIcd9Ontology(std::string_view json_text);

std::set<std::string> PatientIds(const std::vector<PatientRecord> &patients);

// Writers producing files the loaders above accept.
void WritePatients(const std::filesystem::path &path,
                   const std::vector<PatientRecord> &patients);
void WritePrescriptions(const std::filesystem::path &path,
                        const std::vector<PrescriptionRecord> &prescriptions);
void WriteDiagnoses(const std::filesystem::path &path,
                    const std::vector<DiagnosisRecord> &diagnoses);
void WriteDrugKb(const std::filesystem::path &path,
                 const std::vector<DrugKbEntry> &kb);
void WriteIcd9Ontology(const std::filesystem::path &path,
                       const Icd9Ontology &ontology);

// Reads a whole file. Throws DataError naming the path when it cannot be read.
std::string ReadFileToString(const std::filesystem::path &path);

// Shortest decimal that round-trips |value|.
std::string FormatDecimal(double value);

}  // namespace pdd

#endif  // PDD_INGEST_H_
