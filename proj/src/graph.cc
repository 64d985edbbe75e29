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

#include "pdd/graph.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pdd/errors.h"
#include "pdd/normalize.h"
#include "pdd/ntriples.h"

namespace pdd {

void GraphConfig::Validate() const {
  for (const auto &[name, prefix] : {std::pair<const char *, const std::string &>{"namespace", ns},
                                     {"drug_kb_iri_prefix", drug_kb_iri_prefix},
                                     {"icd9_iri_prefix", icd9_iri_prefix}}) {
    if (!IsValidIri(prefix + "x")) {
      throw ConfigError(std::string(name) + " '" + prefix + "' is not an absolute IRI prefix");
    }
  }
}

Iri MintPatientIri(const GraphConfig &config, std::string_view patient_id) {
  return Iri(config.ns + PercentEncode(patient_id));
}

Iri MintDrugIri(const GraphConfig &config, std::string_view drug_name) {
  return Iri(config.ns + PercentEncode(AsciiLower(drug_name)));
}

Iri MintDiseaseIri(const GraphConfig &config, std::string_view normalized_code) {
  return Iri(config.ns + "icd" + PercentEncode(normalized_code));
}

Iri MintTermIri(const GraphConfig &config, std::string_view name) {
  return Iri(config.ns + PercentEncode(name));
}

uint32_t PddGraph::Intern(const Term &term) {
  std::string text = FormatTerm(term);
  auto [it, inserted] = term_ids_.emplace(text, terms_.size());
  if (inserted) {
    terms_.push_back(term);
    term_text_.push_back(std::move(text));
  }
  return it->second;
}

std::optional<uint32_t> PddGraph::Find(const Term &term) const {
  auto it = term_ids_.find(FormatTerm(term));
  if (it == term_ids_.end()) return std::nullopt;
  return it->second;
}

bool PddGraph::Add(const Triple &triple) {
  Ids ids{Intern(triple.subject), Intern(triple.predicate), Intern(triple.object)};
  return triples_.insert(ids).second;
}

bool PddGraph::Contains(const Triple &triple) const {
  auto s = Find(triple.subject), p = Find(triple.predicate), o = Find(triple.object);
  return s && p && o && triples_.count(Ids{*s, *p, *o}) > 0;
}

std::string PddGraph::Line(const Ids &ids) const {
  std::string line;
  line.reserve(term_text_[ids.s].size() + term_text_[ids.p].size() +
               term_text_[ids.o].size() + 4);
  line += term_text_[ids.s];
  line += ' ';
  line += term_text_[ids.p];
  line += ' ';
  line += term_text_[ids.o];
  line += " .";
  return line;
}

std::vector<std::string> PddGraph::SortedLines() const {
  std::vector<std::string> lines;
  lines.reserve(triples_.size());
  for (const Ids &ids : triples_) lines.push_back(Line(ids));
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::vector<Triple> PddGraph::Materialize(std::vector<Ids> ids) const {
  std::vector<std::pair<std::string, Ids>> keyed;
  keyed.reserve(ids.size());
  for (const Ids &i : ids) keyed.emplace_back(Line(i), i);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<Triple> out;
  out.reserve(keyed.size());
  for (const auto &[line, i] : keyed) {
    out.push_back(Triple{std::get<Iri>(terms_[i.s]), std::get<Iri>(terms_[i.p]), terms_[i.o]});
  }
  return out;
}

std::vector<Triple> PddGraph::Triples() const {
  return Materialize(std::vector<Ids>(triples_.begin(), triples_.end()));
}

std::vector<Triple> PddGraph::Query(const TriplePattern &pattern) const {
  std::optional<uint32_t> s, p, o;
  if (pattern.subject && !(s = Find(*pattern.subject))) return {};
  if (pattern.predicate && !(p = Find(*pattern.predicate))) return {};
  if (pattern.object && !(o = Find(*pattern.object))) return {};
  std::vector<Ids> matches;
  for (const Ids &ids : triples_) {
    if ((!s || ids.s == *s) && (!p || ids.p == *p) && (!o || ids.o == *o)) {
      matches.push_back(ids);
    }
  }
  return Materialize(std::move(matches));
}

bool PddGraph::operator==(const PddGraph &other) const {
  return size() == other.size() && SortedLines() == other.SortedLines();
}

std::string SerializeNTriplesToString(const PddGraph &graph) {
  std::string out;
  for (const std::string &line : graph.SortedLines()) {
    out += line;
    out += '\n';
  }
  return out;
}

size_t SerializeNTriples(const PddGraph &graph, const std::filesystem::path &path) {
  std::vector<std::string> lines = graph.SortedLines();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const std::string &line : lines) {
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');
  }
  out.flush();
  if (!out) throw DataError("write failed for " + path.string());
  return lines.size();
}

PddGraph ParseNTriplesGraph(std::string_view text) {
  std::istringstream in{std::string(text)};
  PddGraph graph;
  for (const Triple &triple : ParseNTriples(in)) graph.Add(triple);
  return graph;
}

PddGraph ReadNTriplesGraph(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  PddGraph graph;
  for (const Triple &triple : ParseNTriples(in)) graph.Add(triple);
  return graph;
}

GraphBuild BuildGraph(const std::vector<PatientRecord> &patients,
                      const std::vector<PrescriptionRecord> &prescriptions,
                      const std::vector<DiagnosisRecord> &diagnoses,
                      const std::map<std::string, LinkDecision> &drug_decisions,
                      const std::map<std::string, DiseaseLink> &disease_decisions,
                      const GraphConfig &config) {
  config.Validate();
  GraphBuild build;
  PddGraph &graph = build.graph;
  GraphCounts &counts = build.counts;

  const Iri type(std::string{kRdfType});
  const Iri same_as(std::string{kOwlSameAs});
  const Iri patient_class = MintTermIri(config, kPatientClass);
  const Iri prescribed = MintTermIri(config, kPrescribed);
  const Iri diagnosed = MintTermIri(config, kDiagnosed);

  std::set<std::string> seen_patients;
  for (const PatientRecord &patient : patients) {
    Iri subject = MintPatientIri(config, patient.patient_id);
    if (seen_patients.insert(patient.patient_id).second) ++counts.patients;
    graph.Add({subject, type, patient_class});
    for (const auto &[attribute, value] : patient.demographics) {
      if (graph.Add({subject, MintTermIri(config, attribute), Literal{value, std::nullopt}})) {
        ++counts.demographics_triples;
      }
    }
  }

  std::set<std::string> drug_iris;
  for (const PrescriptionRecord &p : prescriptions) {
    auto decision = drug_decisions.find(p.drug_name_raw);
    if (decision == drug_decisions.end()) {
      throw DataError("no link decision for drug '" + p.drug_name_raw + "'");
    }
    Iri drug = MintDrugIri(config, p.drug_name_raw);
    if (drug_iris.insert(drug.value()).second) ++counts.drug_entities;
    if (graph.Add({MintPatientIri(config, p.patient_id), prescribed, drug})) {
      ++counts.prescription_triples;
    }
    if (decision->second.linked) {
      Iri target(config.drug_kb_iri_prefix + PercentEncode(decision->second.kb_id));
      if (graph.Add({drug, same_as, target})) ++counts.drug_same_as;
    }
  }

  std::set<std::string> disease_iris;
  for (const DiagnosisRecord &d : diagnoses) {
    auto decision = disease_decisions.find(d.icd9_code_raw);
    if (decision == disease_decisions.end()) {
      throw DataError("no link decision for ICD-9 code '" + d.icd9_code_raw + "'");
    }
    const std::string &code = decision->second.normalized;
    Iri disease = MintDiseaseIri(config, code);
    if (disease_iris.insert(disease.value()).second) ++counts.disease_entities;
    if (graph.Add({MintPatientIri(config, d.patient_id), diagnosed, disease})) {
      ++counts.diagnosis_triples;
    }
    if (decision->second.linked) {
      Iri target(config.icd9_iri_prefix + PercentEncode(DottedIcd9(code)));
      if (graph.Add({disease, same_as, target})) ++counts.disease_same_as;
    }
  }
  return build;
}

}  // namespace pdd
