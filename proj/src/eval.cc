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

#include "pdd/eval.h"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pdd/errors.h"
#include "pdd/ingest.h"
#include "pdd/ntriples.h"

namespace pdd {

using json = nlohmann::json;

GoldLinks ParseGoldLinks(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw DataError(std::string("gold links: ") + e.what());
  }
  if (!root.is_object()) throw DataError("gold links: expected an object");
  GoldLinks gold;
  for (const auto &[mention, value] : root.items()) {
    if (value.is_null()) {
      gold[mention] = std::nullopt;
    } else if (value.is_string()) {
      gold[mention] = value.get<std::string>();
    } else {
      throw DataError("gold links: value for '" + mention + "' must be a string or null");
    }
  }
  return gold;
}

GoldLinks LoadGoldLinks(const std::filesystem::path &path) {
  std::string text = ReadFileToString(path);
  try {
    return ParseGoldLinks(text);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteGoldLinks(const std::filesystem::path &path, const GoldLinks &gold) {
  json root = json::object();
  for (const auto &[mention, kb_id] : gold) {
    root[mention] = kb_id ? json(*kb_id) : json(nullptr);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << root.dump(1) << '\n';
}

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kTruePositive:
      return "TP";
    case Verdict::kFalsePositive:
      return "FP";
    case Verdict::kFalseNegative:
      return "FN";
    case Verdict::kTrueNegative:
      return "TN";
  }
  return "TN";
}

EvalReport EvaluateLinks(const std::map<std::string, LinkDecision> &decisions,
                         const GoldLinks &gold) {
  EvalReport report;
  for (const auto &[mention, decision] : decisions) {
    auto expected = gold.find(mention);
    if (expected == gold.end()) {
      throw DataError("mention '" + mention + "' has no gold label");
    }
    MentionVerdict verdict;
    verdict.mention = mention;
    verdict.gold = expected->second;
    if (decision.linked) {
      verdict.predicted = decision.kb_id;
      bool correct = expected->second && *expected->second == decision.kb_id;
      verdict.verdict = correct ? Verdict::kTruePositive : Verdict::kFalsePositive;
    } else {
      verdict.verdict = expected->second ? Verdict::kFalseNegative : Verdict::kTrueNegative;
    }
    switch (verdict.verdict) {
      case Verdict::kTruePositive: ++report.true_positive; break;
      case Verdict::kFalsePositive: ++report.false_positive; break;
      case Verdict::kFalseNegative: ++report.false_negative; break;
      case Verdict::kTrueNegative: ++report.true_negative; break;
    }
    report.verdicts.push_back(std::move(verdict));
  }
  size_t linked = report.true_positive + report.false_positive;
  if (linked > 0) report.precision = static_cast<double>(report.true_positive) / linked;
  size_t linkable = report.true_positive + report.false_negative;
  if (linkable > 0) report.recall = static_cast<double>(report.true_positive) / linkable;
  return report;
}

std::string EvalReportToJson(const EvalReport &report) {
  auto optional = [](const std::optional<std::string> &v) { return v ? json(*v) : json(nullptr); };
  json verdicts = json::array();
  for (const MentionVerdict &v : report.verdicts) {
    verdicts.push_back({{"mention", v.mention},
                        {"predicted", optional(v.predicted)},
                        {"gold", optional(v.gold)},
                        {"verdict", VerdictName(v.verdict)}});
  }
  json root = {{"true_positive", report.true_positive},
               {"false_positive", report.false_positive},
               {"false_negative", report.false_negative},
               {"true_negative", report.true_negative},
               {"precision", report.precision ? json(*report.precision) : json(nullptr)},
               {"recall", report.recall ? json(*report.recall) : json(nullptr)},
               {"verdicts", std::move(verdicts)}};
  return root.dump(1) + "\n";
}

namespace {

std::string Ratio(const std::optional<double> &value) {
  if (!value) return "undefined";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << *value;
  return out.str();
}

// Two- or three-column table with right-aligned numbers.
std::string AlignedTable(const std::vector<std::vector<std::string>> &rows) {
  std::vector<size_t> widths;
  for (const auto &row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::ostringstream out;
  for (const auto &row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        out << std::left << std::setw(static_cast<int>(widths[i])) << row[i];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(widths[i])) << row[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::string EvalReportToText(const EvalReport &report) {
  return AlignedTable({{"metric", "value"},
                       {"true positives", std::to_string(report.true_positive)},
                       {"false positives", std::to_string(report.false_positive)},
                       {"false negatives", std::to_string(report.false_negative)},
                       {"true negatives", std::to_string(report.true_negative)},
                       {"precision", Ratio(report.precision)},
                       {"recall", Ratio(report.recall)}});
}

DatasetStatistics ComputeStatistics(const PddGraph &graph, const GraphConfig &config) {
  const Iri type(std::string{kRdfType});
  const Iri same_as(std::string{kOwlSameAs});
  const Iri patient_class = MintTermIri(config, kPatientClass);
  const Iri prescribed = MintTermIri(config, kPrescribed);
  const Iri diagnosed = MintTermIri(config, kDiagnosed);

  DatasetStatistics stats;
  std::set<std::string> patients;
  for (const Triple &t : graph.Query({std::nullopt, type, Term(patient_class)})) {
    patients.insert(t.subject.value());
  }
  stats.patients = patients.size();

  std::set<std::string> linked;
  for (const Triple &t : graph.Query({std::nullopt, same_as, std::nullopt})) {
    linked.insert(t.subject.value());
  }

  auto tally = [&](const Iri &predicate, size_t *entities, size_t *entities_linked,
                   size_t *triples, size_t *triples_linked) {
    std::set<std::string> objects;
    for (const Triple &t : graph.Query({std::nullopt, predicate, std::nullopt})) {
      const std::string &object = std::get<Iri>(t.object).value();
      ++*triples;
      if (linked.count(object)) ++*triples_linked;
      objects.insert(object);
    }
    *entities = objects.size();
    for (const std::string &object : objects) *entities_linked += linked.count(object);
  };
  tally(prescribed, &stats.drugs_total, &stats.drugs_linked, &stats.patient_drug_triples,
        &stats.patient_drug_linked);
  tally(diagnosed, &stats.diseases_total, &stats.diseases_linked,
        &stats.patient_disease_triples, &stats.patient_disease_linked);

  for (const Triple &t : graph.Triples()) {
    if (!patients.count(t.subject.value())) continue;
    if (t.predicate == type || t.predicate == prescribed || t.predicate == diagnosed) continue;
    ++stats.demographics_triples;
  }
  return stats;
}

std::string StatisticsToJson(const DatasetStatistics &stats) {
  json root = {{"patients", stats.patients},
               {"drugs", {{"total", stats.drugs_total}, {"linked", stats.drugs_linked}}},
               {"diseases", {{"total", stats.diseases_total}, {"linked", stats.diseases_linked}}},
               {"demographics_triples", stats.demographics_triples},
               {"patient_drug_triples",
                {{"total", stats.patient_drug_triples}, {"linked", stats.patient_drug_linked}}},
               {"patient_disease_triples",
                {{"total", stats.patient_disease_triples},
                 {"linked", stats.patient_disease_linked}}}};
  return root.dump(1) + "\n";
}

std::string StatisticsToText(const DatasetStatistics &stats) {
  auto n = [](size_t v) { return std::to_string(v); };
  return AlignedTable({{"", "overall", "linked to KG"},
                       {"patients", n(stats.patients), ""},
                       {"drugs", n(stats.drugs_total), n(stats.drugs_linked)},
                       {"diseases", n(stats.diseases_total), n(stats.diseases_linked)},
                       {"demographics triples", n(stats.demographics_triples), ""},
                       {"patient-drug triples", n(stats.patient_drug_triples),
                        n(stats.patient_drug_linked)},
                       {"patient-disease triples", n(stats.patient_disease_triples),
                        n(stats.patient_disease_linked)}});
}

}  // namespace pdd
