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

#ifndef PDD_SYNTHETIC_H_
#define PDD_SYNTHETIC_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "pdd/records.h"

namespace pdd {

enum class NoiseProfile { kClean, kMimicLike };

NoiseProfile ParseNoiseProfile(std::string_view name);
std::string_view NoiseProfileName(NoiseProfile profile);

// Words appended to knowledge-base names to make EMR-style mentions.
inline constexpr std::array<std::string_view, 5> kInsignificantTokens = {
    "10%", "200mg", "Glass Bottle", "Mini Bag Plus", "NS"};

// Saline mentions with no knowledge-base entity, emitted by the mimic_like
// profile with a null gold link.
inline constexpr std::array<std::string_view, 4> kSalineMentions = {
    "NS", "1/2 NS", "NS (Mini Bag Plus)", "NS (Glass Bottle)"};

struct SyntheticCorpus {
  std::vector<PatientRecord> patients;
  std::vector<PrescriptionRecord> prescriptions;
  std::vector<DiagnosisRecord> diagnoses;
  std::vector<DrugKbEntry> drug_kb;
  Icd9Ontology ontology;
  // Every drug name that appears in |prescriptions|.
  GoldLinks gold_links;
};

// Deterministic in all arguments. The clean profile prescribes drugs by their
// exact canonical names. The mimic_like profile derives up to three mention
// variants per drug by alias substitution, word reordering, and appended
// insignificant tokens, perturbs dosages by at most 2%, drops some dosages,
// adds saline mentions, and sprinkles the diagnosis codes 71970 and NULL,
// which the ontology omits. Prescribed dosages always come from the drug's
// standard dosages, and takers are usually diagnosed with one of its
// indications (always under the clean profile). Throws ConfigError when a
// count is below 1.
SyntheticCorpus GenerateSyntheticCorpus(uint64_t seed, int n_patients, int n_kb_drugs,
                                        NoiseProfile profile);

// Writes patients.csv, prescriptions.csv, diagnoses.csv, drug_kb.json,
// icd9_ontology.json and gold_links.json into |dir|, creating it if needed.
void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::filesystem::path &dir);

}  // namespace pdd

#endif  // PDD_SYNTHETIC_H_
