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

#ifndef PDD_EVAL_H_
#define PDD_EVAL_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdd/graph.h"
#include "pdd/linker.h"

namespace pdd {

// gold_links.json: object mapping mention to kb_id string or null.
GoldLinks ParseGoldLinks(std::string_view json_text);
GoldLinks LoadGoldLinks(const std::filesystem::path &path);
void WriteGoldLinks(const std::filesystem::path &path, const GoldLinks &gold);

enum class Verdict { kTruePositive, kFalsePositive, kFalseNegative, kTrueNegative };

std::string_view VerdictName(Verdict verdict);

struct MentionVerdict {
  std::string mention;
  std::optional<std::string> predicted;
  std::optional<std::string> gold;
  Verdict verdict = Verdict::kTrueNegative;
};

struct EvalReport {
  size_t true_positive = 0;
  size_t false_positive = 0;
  size_t false_negative = 0;
  size_t true_negative = 0;
  // nullopt when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
  std::vector<MentionVerdict> verdicts;  // ordered by mention

  size_t evaluated() const {
    return true_positive + false_positive + false_negative + true_negative;
  }
};

// Per-mention scoring. Linked to the gold entity is a true positive; linked
// anywhere else (including when gold has no entity) is a false positive;
// unlinked is a false negative when gold has an entity and a true negative
// otherwise. Throws DataError when a decided mention is missing from |gold|.
EvalReport EvaluateLinks(const std::map<std::string, LinkDecision> &decisions,
                         const GoldLinks &gold);

std::string EvalReportToJson(const EvalReport &report);
std::string EvalReportToText(const EvalReport &report);

// Entity and triple counts of a built graph.
struct DatasetStatistics {
  size_t patients = 0;
  size_t drugs_total = 0;
  size_t drugs_linked = 0;
  size_t diseases_total = 0;
  size_t diseases_linked = 0;
  size_t demographics_triples = 0;
  size_t patient_drug_triples = 0;
  size_t patient_drug_linked = 0;
  size_t patient_disease_triples = 0;
  size_t patient_disease_linked = 0;

  bool operator==(const DatasetStatistics &other) const = default;
};

// Recovers the counts from the graph alone: patients are rdf:type <ns>Patient
// subjects, drugs and diseases are objects of <ns>prescribed and
// <ns>diagnosed, and an entity is linked when it has an owl:sameAs triple.
DatasetStatistics ComputeStatistics(const PddGraph &graph, const GraphConfig &config);

std::string StatisticsToJson(const DatasetStatistics &stats);
std::string StatisticsToText(const DatasetStatistics &stats);

}  // namespace pdd

#endif  // PDD_EVAL_H_
