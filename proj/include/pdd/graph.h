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

#ifndef PDD_GRAPH_H_
#define PDD_GRAPH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pdd/linker.h"
#include "pdd/rdf.h"
#include "pdd/records.h"

namespace pdd {

struct GraphConfig {
  std::string ns = "http://kmap.xjtudlc.com/pdd_data/";
  std::string drug_kb_iri_prefix = "http://bio2rdf.org/drugbank:";
  std::string icd9_iri_prefix = "http://bio2rdf.org/icd9:";

  // Throws ConfigError when a prefix cannot start an absolute IRI.
  void Validate() const;
};

// <ns><percent-encoded id>
Iri MintPatientIri(const GraphConfig &config, std::string_view patient_id);
// <ns><percent-encoded lowercase name>
Iri MintDrugIri(const GraphConfig &config, std::string_view drug_name);
// <ns>icd<normalized code>
Iri MintDiseaseIri(const GraphConfig &config, std::string_view normalized_code);
// <ns><percent-encoded name>, used for predicates and classes.
Iri MintTermIri(const GraphConfig &config, std::string_view name);

// Bound positions must match exactly; nullopt is a wildcard.
struct TriplePattern {
  std::optional<Iri> subject;
  std::optional<Iri> predicate;
  std::optional<Term> object;
};

// A set of triples. Terms are dictionary-encoded once in their canonical
// N-Triples form; triples are stored as id triples.
class PddGraph {
 public:
  // Returns false when the triple was already present.
  bool Add(const Triple &triple);
  bool Contains(const Triple &triple) const;
  size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  // Canonical N-Triples lines ("<s> <p> o .") in byte order.
  std::vector<std::string> SortedLines() const;
  // All triples ordered by their canonical line.
  std::vector<Triple> Triples() const;
  // Matching triples ordered by their canonical line.
  std::vector<Triple> Query(const TriplePattern &pattern) const;

  bool operator==(const PddGraph &other) const;

 private:
  struct Ids {
    uint32_t s, p, o;
    bool operator==(const Ids &other) const = default;
  };
  struct IdsHash {
    size_t operator()(const Ids &ids) const {
      uint64_t h = ids.s;
      h = h * 0x9E3779B97F4A7C15ull + ids.p;
      h = h * 0x9E3779B97F4A7C15ull + ids.o;
      return static_cast<size_t>(h ^ (h >> 29));
    }
  };

  uint32_t Intern(const Term &term);
  std::optional<uint32_t> Find(const Term &term) const;
  std::string Line(const Ids &ids) const;
  std::vector<Triple> Materialize(std::vector<Ids> ids) const;

  std::vector<Term> terms_;
  std::vector<std::string> term_text_;
  std::unordered_map<std::string, uint32_t> term_ids_;
  std::unordered_set<Ids, IdsHash> triples_;
};

// Writes the graph as sorted canonical N-Triples with '\n' line endings.
// Returns the number of lines written; throws DataError on I/O failure.
size_t SerializeNTriples(const PddGraph &graph, const std::filesystem::path &path);
std::string SerializeNTriplesToString(const PddGraph &graph);

PddGraph ReadNTriplesGraph(const std::filesystem::path &path);
PddGraph ParseNTriplesGraph(std::string_view text);

// Per-build tallies, counted while the graph is assembled.
struct GraphCounts {
  size_t patients = 0;
  size_t drug_entities = 0;
  size_t disease_entities = 0;
  size_t demographics_triples = 0;
  size_t prescription_triples = 0;
  size_t diagnosis_triples = 0;
  size_t drug_same_as = 0;
  size_t disease_same_as = 0;

  bool operator==(const GraphCounts &other) const = default;
};

struct GraphBuild {
  PddGraph graph;
  GraphCounts counts;
};

// Assembles the fact graph:
//   <patient> rdf:type <ns>Patient
//   <patient> <ns><attribute> "value"        per demographics attribute
//   <patient> <ns>prescribed <drug>          per distinct patient-drug pair
//   <patient> <ns>diagnosed <ns>icd<code>    per distinct patient-code pair
//   <drug> owl:sameAs <kb prefix><kb_id>     for linked drugs
//   <disease> owl:sameAs <icd9 prefix><dotted code>  for linked codes
// Unlinked drugs and codes keep their local IRIs and fact triples. Throws
// DataError when a prescription or diagnosis has no decision.
GraphBuild BuildGraph(const std::vector<PatientRecord> &patients,
                      const std::vector<PrescriptionRecord> &prescriptions,
                      const std::vector<DiagnosisRecord> &diagnoses,
                      const std::map<std::string, LinkDecision> &drug_decisions,
                      const std::map<std::string, DiseaseLink> &disease_decisions,
                      const GraphConfig &config);

inline constexpr std::string_view kPrescribed = "prescribed";
inline constexpr std::string_view kDiagnosed = "diagnosed";
inline constexpr std::string_view kPatientClass = "Patient";

}  // namespace pdd

#endif  // PDD_GRAPH_H_
