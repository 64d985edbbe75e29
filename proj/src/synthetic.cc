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

#include "pdd/synthetic.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <set>
#include <string>

#include "pdd/errors.h"
#include "pdd/eval.h"
#include "pdd/ingest.h"
#include "pdd/normalize.h"

namespace pdd {

namespace {

constexpr std::array<std::string_view, 5> kSaltWords = {"Sodium", "Hydrochloride", "Sulfate",
                                                        "Potassium", "Acetate"};
constexpr std::array<std::string_view, 16> kOnsets = {"b", "c", "d", "f", "g", "l", "m", "n",
                                                      "p", "r", "s", "t", "v", "z", "pr", "cl"};
constexpr std::array<std::string_view, 5> kVowels = {"a", "e", "i", "o", "u"};
constexpr std::array<std::string_view, 10> kEndings = {"ex", "in",  "ol",  "ine", "ate",
                                                       "ide", "one", "ax", "ium", "ant"};
const std::array<Dosage, 12> kDosages = {
    Dosage{5, "mg"},   Dosage{10, "mg"},  Dosage{20, "mg"},  Dosage{40, "mg"},
    Dosage{81, "mg"},  Dosage{100, "mg"}, Dosage{250, "mg"}, Dosage{500, "mg"},
    Dosage{50, "mcg"}, Dosage{100, "mcg"}, Dosage{5, "ml"},  Dosage{10, "ml"}};

// Platform-independent draws on top of mt19937_64; the standard
// distributions are implementation-defined.
class Random {
 public:
  explicit Random(uint64_t seed) : engine_(seed) {}

  size_t Uniform(size_t n) { return static_cast<size_t>(engine_() % n); }
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool Bernoulli(double p) { return Unit() < p; }
  template <typename Container>
  const auto &Pick(const Container &items) {
    return items[Uniform(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

class WordMaker {
 public:
  explicit WordMaker(Random *random) : random_(random) {
    for (std::string_view w : kSaltWords) used_.insert(AsciiLower(w));
    for (std::string_view w : kInsignificantTokens) {
      for (const std::string &t : TokenizeName(w).tokens) used_.insert(t);
    }
  }

  // A fresh capitalized word never returned before.
  std::string Next() {
    while (true) {
      std::string word;
      size_t syllables = 2 + random_->Uniform(2);
      for (size_t i = 0; i < syllables; ++i) {
        word += random_->Pick(kOnsets);
        word += random_->Pick(kVowels);
      }
      word += random_->Pick(kEndings);
      if (!used_.insert(word).second) continue;
      word[0] = static_cast<char>(word[0] - 'a' + 'A');
      return word;
    }
  }

  // Optionally decorates |word| with a salt word before or after it.
  std::string MaybeSalted(const std::string &word, double p) {
    if (!random_->Bernoulli(p)) return word;
    std::string salt(random_->Pick(kSaltWords));
    return random_->Bernoulli(0.5) ? salt + " " + word : word + " " + salt;
  }

 private:
  Random *random_;
  std::set<std::string> used_;
};

std::string FormatCode(Random *random, const std::set<std::string> &taken) {
  while (true) {
    std::string code;
    if (random->Bernoulli(0.15)) {
      code = "V" + std::to_string(10 + random->Uniform(80)) + "." +
             std::to_string(random->Uniform(10));
    } else {
      code = std::to_string(100 + random->Uniform(900));
      size_t decimals = random->Uniform(3);
      if (decimals > 0) code += ".";
      for (size_t i = 0; i < decimals; ++i) code += std::to_string(random->Uniform(10));
    }
    std::string normalized = NormalizeIcd9(code);
    if (normalized == "71970" || taken.count(normalized)) continue;
    return normalized;
  }
}

Icd9Ontology MakeOntology(Random *random, int n_kb_drugs) {
  Icd9Ontology ontology;
  ontology.codes.insert("99592");
  ontology.labels["99592"] = "Severe sepsis";
  size_t target = std::max<size_t>(60, 3 * static_cast<size_t>(n_kb_drugs));
  while (ontology.codes.size() < target) {
    std::string code = FormatCode(random, ontology.codes);
    ontology.codes.insert(code);
    ontology.labels[code] = "Condition " + DottedIcd9(code);
  }
  return ontology;
}

std::vector<DrugKbEntry> MakeKb(Random *random, WordMaker *words, int n_kb_drugs,
                                const std::vector<std::string> &codes) {
  std::vector<DrugKbEntry> kb;
  for (int i = 0; i < n_kb_drugs; ++i) {
    DrugKbEntry entry;
    char id[16];
    std::snprintf(id, sizeof(id), "DB%05d", i + 1);
    entry.kb_id = id;
    entry.canonical_name = words->MaybeSalted(words->Next(), 0.3);
    size_t aliases = 1 + random->Uniform(2);
    for (size_t a = 0; a < aliases; ++a) {
      entry.aliases.push_back(words->MaybeSalted(words->Next(), 0.2));
    }
    size_t indications = 1 + random->Uniform(2);
    while (entry.indications.size() < indications) entry.indications.insert(random->Pick(codes));
    size_t dosages = 1 + random->Uniform(2);
    while (entry.standard_dosages.size() < dosages) {
      entry.standard_dosages.insert(random->Pick(kDosages));
    }
    kb.push_back(std::move(entry));
  }
  return kb;
}

// One EMR-style rendering of a knowledge-base name.
std::string MakeVariant(Random *random, const DrugKbEntry &entry) {
  std::string base = entry.canonical_name;
  if (!entry.aliases.empty() && random->Bernoulli(0.4)) base = random->Pick(entry.aliases);

  std::vector<std::string> words;
  size_t start = 0;
  while (start <= base.size()) {
    size_t space = base.find(' ', start);
    if (space == std::string::npos) space = base.size();
    if (space > start) words.push_back(base.substr(start, space - start));
    start = space + 1;
  }
  if (words.size() > 1 && random->Bernoulli(0.3)) std::reverse(words.begin(), words.end());

  std::string mention;
  for (const std::string &w : words) mention += (mention.empty() ? "" : " ") + w;
  if (random->Bernoulli(0.7)) {
    std::string_view token = random->Pick(kInsignificantTokens);
    if (token.find(' ') != std::string_view::npos && random->Bernoulli(0.5)) {
      mention += " (" + std::string(token) + ")";
    } else {
      mention += " " + std::string(token);
    }
  }
  return mention;
}

std::string PatientId(int index) { return std::to_string(10000 + index); }

}  // namespace

NoiseProfile ParseNoiseProfile(std::string_view name) {
  if (name == "clean") return NoiseProfile::kClean;
  if (name == "mimic_like") return NoiseProfile::kMimicLike;
  throw ConfigError("unknown noise profile '" + std::string(name) +
                    "' (expected clean or mimic_like)");
}

std::string_view NoiseProfileName(NoiseProfile profile) {
  return profile == NoiseProfile::kClean ? "clean" : "mimic_like";
}

SyntheticCorpus GenerateSyntheticCorpus(uint64_t seed, int n_patients, int n_kb_drugs,
                                        NoiseProfile profile) {
  if (n_kb_drugs < 1) throw ConfigError("n_kb_drugs must be >= 1");
  if (n_patients < 1) throw ConfigError("n_patients must be >= 1");
  const bool noisy = profile == NoiseProfile::kMimicLike;

  Random random(seed);
  WordMaker words(&random);
  SyntheticCorpus corpus;
  corpus.ontology = MakeOntology(&random, n_kb_drugs);
  std::vector<std::string> codes(corpus.ontology.codes.begin(), corpus.ontology.codes.end());
  corpus.drug_kb = MakeKb(&random, &words, n_kb_drugs, codes);

  // Mention variants per drug, unique across the corpus after lowercasing.
  std::set<std::string> taken;
  for (std::string_view saline : kSalineMentions) taken.insert(AsciiLower(saline));
  std::vector<std::vector<std::string>> variants(corpus.drug_kb.size());
  for (size_t d = 0; d < corpus.drug_kb.size(); ++d) {
    const DrugKbEntry &entry = corpus.drug_kb[d];
    if (!noisy) {
      variants[d].push_back(entry.canonical_name);
      continue;
    }
    size_t wanted = 1 + random.Uniform(3);
    for (int attempt = 0; attempt < 12 && variants[d].size() < wanted; ++attempt) {
      std::string mention = MakeVariant(&random, entry);
      if (taken.insert(AsciiLower(mention)).second) variants[d].push_back(mention);
    }
    if (variants[d].empty()) variants[d].push_back(entry.canonical_name);
  }

  static const std::array<std::string_view, 3> kAgeGroups = {"18-39", "40-64", "65+"};
  static const std::array<std::string_view, 4> kEthnicities = {"WHITE", "BLACK", "ASIAN",
                                                               "HISPANIC"};
  for (int p = 0; p < n_patients; ++p) {
    PatientRecord patient;
    patient.patient_id = PatientId(p);
    patient.demographics.emplace_back("gender", random.Bernoulli(0.5) ? "F" : "M");
    patient.demographics.emplace_back("age_group", random.Pick(kAgeGroups));
    if (random.Bernoulli(0.8)) {
      patient.demographics.emplace_back("ethnicity", random.Pick(kEthnicities));
    }

    std::set<std::string> diagnosed;
    size_t drugs = 1 + random.Uniform(4);
    for (size_t k = 0; k < drugs; ++k) {
      size_t d = random.Uniform(corpus.drug_kb.size());
      const DrugKbEntry &entry = corpus.drug_kb[d];
      PrescriptionRecord rx;
      rx.patient_id = patient.patient_id;
      rx.drug_name_raw = random.Pick(variants[d]);
      std::vector<Dosage> standard(entry.standard_dosages.begin(), entry.standard_dosages.end());
      Dosage dosage = random.Pick(standard);
      if (noisy && random.Bernoulli(0.3)) {
        // Within 2% of the standard value.
        double scale = 1.0 + (static_cast<double>(random.Uniform(5)) - 2.0) / 100.0;
        dosage.value = dosage.value * scale;
      }
      if (!noisy || !random.Bernoulli(0.15)) rx.dosage = dosage;
      corpus.gold_links[rx.drug_name_raw] = entry.kb_id;
      corpus.prescriptions.push_back(std::move(rx));

      if (!noisy || random.Bernoulli(0.9)) {
        std::vector<std::string> indications(entry.indications.begin(), entry.indications.end());
        diagnosed.insert(random.Pick(indications));
      }
    }
    if (noisy && random.Bernoulli(0.1)) {
      PrescriptionRecord rx;
      rx.patient_id = patient.patient_id;
      rx.drug_name_raw = std::string(random.Pick(kSalineMentions));
      if (random.Bernoulli(0.8)) rx.dosage = Dosage{1000, "ml"};
      corpus.gold_links[rx.drug_name_raw] = std::nullopt;
      corpus.prescriptions.push_back(std::move(rx));
    }

    size_t extra = random.Uniform(4);
    for (size_t k = 0; k < extra; ++k) diagnosed.insert(random.Pick(codes));
    if (noisy && random.Bernoulli(0.02)) diagnosed.insert("71970");
    if (noisy && random.Bernoulli(0.02)) diagnosed.insert("NULL");
    for (const std::string &code : diagnosed) {
      corpus.diagnoses.push_back({patient.patient_id, code});
    }
    corpus.patients.push_back(std::move(patient));
  }
  return corpus;
}

void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::filesystem::path &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
  WritePatients(dir / "patients.csv", corpus.patients);
  WritePrescriptions(dir / "prescriptions.csv", corpus.prescriptions);
  WriteDiagnoses(dir / "diagnoses.csv", corpus.diagnoses);
  WriteDrugKb(dir / "drug_kb.json", corpus.drug_kb);
  WriteIcd9Ontology(dir / "icd9_ontology.json", corpus.ontology);
  WriteGoldLinks(dir / "gold_links.json", corpus.gold_links);
}

}  // namespace pdd
