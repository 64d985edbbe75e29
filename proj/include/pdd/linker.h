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

#ifndef PDD_LINKER_H_
#define PDD_LINKER_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pdd/enm.h"
#include "pdd/normalize.h"
#include "pdd/records.h"
#include "pdd/translation_table.h"

namespace pdd {

enum class RuleOutcome { kPass, kFail, kSkipped };

std::string_view RuleOutcomeName(RuleOutcome outcome);
RuleOutcome ParseRuleOutcome(std::string_view name);

struct Candidate {
  std::string kb_id;
  double score = 0.0;  // P(m | d), linear scale
  // log P(m | d) - log eps. Ranking uses this so that eps cannot reorder
  // near-ties through rounding.
  double log_score = 0.0;

  bool operator==(const Candidate &other) const = default;
};

struct RuleAudit {
  std::string kb_id;
  RuleOutcome rule1 = RuleOutcome::kSkipped;
  RuleOutcome rule2 = RuleOutcome::kSkipped;
  double score = 0.0;

  bool operator==(const RuleAudit &other) const = default;
};

struct LinkDecision {
  std::string mention_raw;
  bool linked = false;
  std::string kb_id;   // when linked
  double score = 0.0;  // when linked
  std::string reason;  // when unlinked
  std::vector<RuleAudit> rule_audit;

  bool operator==(const LinkDecision &other) const = default;
};

// Who took each mention and what each patient was diagnosed with.
struct PatientContext {
  std::unordered_map<std::string, std::set<std::string>> diagnoses_by_patient;
  std::unordered_map<std::string, std::set<std::string>> patients_by_drug;
};

// Diagnosis codes are normalized on the way in; records whose code does not
// normalize are skipped.
PatientContext BuildPatientContext(const std::vector<PrescriptionRecord> &prescriptions,
                                   const std::vector<DiagnosisRecord> &diagnoses);

// Rule 1: some patient who took |mention_raw| has a diagnosis listed among
// the candidate's indications. Skipped without indications or takers.
RuleOutcome CheckRule1(const DrugKbEntry &candidate, const std::string &mention_raw,
                       const PatientContext &ctx);

// Rule 2: some prescribed dosage matches a standard dosage: same unit after
// lowercasing and |v - v*| <= tolerance * v*. Skipped without standard
// dosages or without any dosed prescription.
RuleOutcome CheckRule2(const DrugKbEntry &candidate,
                       const std::vector<PrescriptionRecord> &prescriptions,
                       double tolerance = 0.05);

struct LinkerConfig {
  int k = 50;
  double score_floor = 1e-12;
  double dosage_tolerance = 0.05;
  double epsilon = 1.0;

  void Validate() const;
};

// Links drug mentions against a knowledge base with a trained table.
// Immutable after construction; Link() may be called concurrently.
class DrugLinker {
 public:
  // Throws DataError on an empty knowledge base, ConfigError on a bad config.
  DrugLinker(std::vector<DrugKbEntry> kb, TranslationTable table, LinkerConfig config);

  // The top-k entries by P(m | d) against canonical names, ordered by score
  // descending then kb_id ascending.
  std::vector<Candidate> GenerateCandidates(const TokenizedName &mention, int k) const;

  // Scores |mention| against the top-k candidates, drops those failing a
  // rule, and picks the best survivor. Unlinked when no candidate survives or
  // the best survivor's P(m | d) / eps is below the score floor. Throws
  // std::invalid_argument when the mention has no tokens.
  LinkDecision Link(const std::string &mention_raw, const PatientContext &ctx,
                    const std::vector<PrescriptionRecord> &prescriptions) const;

  // Links every distinct drug name in |prescriptions|. Names without tokens
  // get an unlinked decision rather than an exception.
  std::map<std::string, LinkDecision> LinkAll(
      const std::vector<PrescriptionRecord> &prescriptions, const PatientContext &ctx) const;

  const std::vector<DrugKbEntry> &kb() const { return kb_; }
  const TranslationTable &table() const { return table_; }
  const LinkerConfig &config() const { return config_; }

 private:
  std::vector<DrugKbEntry> kb_;
  TranslationTable table_;
  LinkerConfig config_;
  std::vector<EncodedName> encoded_names_;
  std::unordered_map<std::string, size_t> index_by_id_;
};

struct DiseaseLink {
  std::string code_raw;
  std::string normalized;
  bool linked = false;

  bool operator==(const DiseaseLink &other) const = default;
};

// Exact match of the normalized code against the ontology. Throws DataError
// when the code normalizes to nothing.
DiseaseLink LinkDisease(const std::string &icd9_raw, const Icd9Ontology &ontology);

// One JSON object per decision, as written to the audit file:
// {mention, outcome, kb_id?, score?, reason?, audit[]}.
std::string DecisionToJsonLine(const LinkDecision &decision);
LinkDecision DecisionFromJsonLine(std::string_view line);

void WriteDecisions(const std::string &path, const std::map<std::string, LinkDecision> &decisions);
std::map<std::string, LinkDecision> ReadDecisions(const std::string &path);

}  // namespace pdd

#endif  // PDD_LINKER_H_
