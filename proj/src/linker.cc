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

#include "pdd/linker.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pdd/errors.h"

namespace pdd {

using json = nlohmann::json;

std::string_view RuleOutcomeName(RuleOutcome outcome) {
  switch (outcome) {
    case RuleOutcome::kPass:
      return "pass";
    case RuleOutcome::kFail:
      return "fail";
    case RuleOutcome::kSkipped:
      return "skipped";
  }
  return "skipped";
}

RuleOutcome ParseRuleOutcome(std::string_view name) {
  if (name == "pass") return RuleOutcome::kPass;
  if (name == "fail") return RuleOutcome::kFail;
  if (name == "skipped") return RuleOutcome::kSkipped;
  throw DataError("unknown rule outcome '" + std::string(name) + "'");
}

PatientContext BuildPatientContext(const std::vector<PrescriptionRecord> &prescriptions,
                                   const std::vector<DiagnosisRecord> &diagnoses) {
  PatientContext ctx;
  for (const PrescriptionRecord &p : prescriptions) {
    ctx.patients_by_drug[p.drug_name_raw].insert(p.patient_id);
  }
  for (const DiagnosisRecord &d : diagnoses) {
    try {
      ctx.diagnoses_by_patient[d.patient_id].insert(NormalizeIcd9(d.icd9_code_raw));
    } catch (const DataError &) {
      continue;
    }
  }
  return ctx;
}

RuleOutcome CheckRule1(const DrugKbEntry &candidate, const std::string &mention_raw,
                       const PatientContext &ctx) {
  if (candidate.indications.empty()) return RuleOutcome::kSkipped;
  auto takers = ctx.patients_by_drug.find(mention_raw);
  if (takers == ctx.patients_by_drug.end() || takers->second.empty()) {
    return RuleOutcome::kSkipped;
  }
  for (const std::string &patient : takers->second) {
    auto diagnoses = ctx.diagnoses_by_patient.find(patient);
    if (diagnoses == ctx.diagnoses_by_patient.end()) continue;
    for (const std::string &code : diagnoses->second) {
      if (candidate.indications.count(code)) return RuleOutcome::kPass;
    }
  }
  return RuleOutcome::kFail;
}

RuleOutcome CheckRule2(const DrugKbEntry &candidate,
                       const std::vector<PrescriptionRecord> &prescriptions, double tolerance) {
  if (candidate.standard_dosages.empty()) return RuleOutcome::kSkipped;
  bool any_dosage = false;
  for (const PrescriptionRecord &p : prescriptions) {
    if (!p.dosage) continue;
    any_dosage = true;
    std::string unit = AsciiLower(p.dosage->unit);
    for (const Dosage &standard : candidate.standard_dosages) {
      if (unit == AsciiLower(standard.unit) &&
          std::abs(p.dosage->value - standard.value) <= tolerance * standard.value) {
        return RuleOutcome::kPass;
      }
    }
  }
  return any_dosage ? RuleOutcome::kFail : RuleOutcome::kSkipped;
}

void LinkerConfig::Validate() const {
  if (k < 1) throw ConfigError("linker k must be >= 1");
  if (!(score_floor >= 0.0)) throw ConfigError("score_floor must be non-negative");
  if (!(dosage_tolerance >= 0.0)) throw ConfigError("dosage_tolerance must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
}

DrugLinker::DrugLinker(std::vector<DrugKbEntry> kb, TranslationTable table, LinkerConfig config)
    : kb_(std::move(kb)), table_(std::move(table)), config_(config) {
  config_.Validate();
  if (kb_.empty()) throw DataError("drug knowledge base is empty");
  for (size_t i = 0; i < kb_.size(); ++i) {
    TokenizedName name = TokenizeName(kb_[i].canonical_name);
    if (name.empty()) throw DataError("drug '" + kb_[i].kb_id + "' has an empty name");
    encoded_names_.push_back(EncodeCandidate(name, table_));
    index_by_id_.emplace(kb_[i].kb_id, i);
  }
}

std::vector<Candidate> DrugLinker::GenerateCandidates(const TokenizedName &mention,
                                                      int k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (mention.empty()) throw std::invalid_argument("cannot link an empty mention");
  EncodedName encoded = EncodeMention(mention, table_);
  double log_epsilon = std::log(config_.epsilon);

  std::vector<Candidate> all;
  all.reserve(kb_.size());
  for (size_t i = 0; i < kb_.size(); ++i) {
    double log_score = LogScoreWithoutEpsilon(encoded, encoded_names_[i], table_);
    all.push_back({kb_[i].kb_id, std::exp(log_epsilon + log_score), log_score});
  }
  auto order = [](const Candidate &a, const Candidate &b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    return a.kb_id < b.kb_id;
  };
  size_t keep = std::min(all.size(), static_cast<size_t>(k));
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), order);
  all.resize(keep);
  return all;
}

LinkDecision DrugLinker::Link(const std::string &mention_raw, const PatientContext &ctx,
                              const std::vector<PrescriptionRecord> &prescriptions) const {
  TokenizedName mention = TokenizeName(mention_raw);
  if (mention.empty()) {
    throw std::invalid_argument("mention '" + mention_raw + "' has no tokens");
  }

  LinkDecision decision;
  decision.mention_raw = mention_raw;
  const Candidate *best = nullptr;
  std::vector<Candidate> candidates = GenerateCandidates(mention, config_.k);
  for (const Candidate &candidate : candidates) {
    const DrugKbEntry &entry = kb_[index_by_id_.at(candidate.kb_id)];
    RuleAudit audit{candidate.kb_id, CheckRule1(entry, mention_raw, ctx),
                    CheckRule2(entry, prescriptions, config_.dosage_tolerance),
                    candidate.score};
    // Candidates arrive in rank order, so the first survivor is the argmax.
    if (best == nullptr && audit.rule1 != RuleOutcome::kFail &&
        audit.rule2 != RuleOutcome::kFail) {
      best = &candidate;
    }
    decision.rule_audit.push_back(std::move(audit));
  }

  if (best == nullptr) {
    decision.reason = "all candidates failed rules";
  } else if (config_.score_floor > 0.0 && best->log_score < std::log(config_.score_floor)) {
    decision.reason = "below score floor";
  } else {
    decision.linked = true;
    decision.kb_id = best->kb_id;
    decision.score = best->score;
  }
  return decision;
}

std::map<std::string, LinkDecision> DrugLinker::LinkAll(
    const std::vector<PrescriptionRecord> &prescriptions, const PatientContext &ctx) const {
  std::map<std::string, std::vector<PrescriptionRecord>> by_mention;
  for (const PrescriptionRecord &p : prescriptions) by_mention[p.drug_name_raw].push_back(p);

  std::map<std::string, LinkDecision> decisions;
  std::vector<const std::pair<const std::string, std::vector<PrescriptionRecord>> *> work;
  for (const auto &item : by_mention) {
    if (TokenizeName(item.first).empty()) {
      // Punctuation-only names cannot be scored; record them as unlinked.
      LinkDecision decision;
      decision.mention_raw = item.first;
      decision.reason = "mention has no tokens";
      decisions.emplace(item.first, std::move(decision));
    } else {
      work.push_back(&item);
    }
  }
  std::vector<LinkDecision> results(work.size());

  size_t threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, (work.size() + 127) / 128);
  auto run = [&](size_t shard, size_t shards) {
    for (size_t i = shard; i < work.size(); i += shards) {
      results[i] = Link(work[i]->first, ctx, work[i]->second);
    }
  };
  if (threads <= 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
    for (std::thread &t : pool) t.join();
  }

  for (size_t i = 0; i < work.size(); ++i) {
    decisions.emplace(work[i]->first, std::move(results[i]));
  }
  return decisions;
}

DiseaseLink LinkDisease(const std::string &icd9_raw, const Icd9Ontology &ontology) {
  DiseaseLink link;
  link.code_raw = icd9_raw;
  link.normalized = NormalizeIcd9(icd9_raw);
  link.linked = ontology.Contains(link.normalized);
  return link;
}

std::string DecisionToJsonLine(const LinkDecision &decision) {
  json audit = json::array();
  for (const RuleAudit &a : decision.rule_audit) {
    audit.push_back({{"kb_id", a.kb_id},
                     {"rule1", RuleOutcomeName(a.rule1)},
                     {"rule2", RuleOutcomeName(a.rule2)},
                     {"score", a.score}});
  }
  json object = {{"mention", decision.mention_raw},
                 {"outcome", decision.linked ? "linked" : "unlinked"}};
  if (decision.linked) {
    object["kb_id"] = decision.kb_id;
    object["score"] = decision.score;
  } else {
    object["reason"] = decision.reason;
  }
  object["audit"] = std::move(audit);
  return object.dump();
}

LinkDecision DecisionFromJsonLine(std::string_view line) {
  LinkDecision decision;
  try {
    json object = json::parse(line);
    decision.mention_raw = object.at("mention").get<std::string>();
    std::string outcome = object.at("outcome").get<std::string>();
    if (outcome == "linked") {
      decision.linked = true;
      decision.kb_id = object.at("kb_id").get<std::string>();
      decision.score = object.at("score").get<double>();
    } else if (outcome == "unlinked") {
      decision.reason = object.value("reason", std::string());
    } else {
      throw DataError("unknown outcome '" + outcome + "'");
    }
    for (const json &a : object.at("audit")) {
      decision.rule_audit.push_back({a.at("kb_id").get<std::string>(),
                                     ParseRuleOutcome(a.at("rule1").get<std::string>()),
                                     ParseRuleOutcome(a.at("rule2").get<std::string>()),
                                     a.at("score").get<double>()});
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed link decision: ") + e.what());
  }
  return decision;
}

void WriteDecisions(const std::string &path,
                    const std::map<std::string, LinkDecision> &decisions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  for (const auto &[mention, decision] : decisions) out << DecisionToJsonLine(decision) << '\n';
  if (!out) throw DataError("write failed for " + path);
}

std::map<std::string, LinkDecision> ReadDecisions(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::map<std::string, LinkDecision> decisions;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      LinkDecision decision = DecisionFromJsonLine(line);
      std::string mention = decision.mention_raw;
      if (!decisions.emplace(mention, std::move(decision)).second) {
        throw DataError("duplicate mention '" + mention + "'");
      }
    } catch (const DataError &e) {
      throw DataError(path + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return decisions;
}

}  // namespace pdd
