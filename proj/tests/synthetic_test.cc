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

#include <set>
#include <string>

#include "gtest/gtest.h"
#include "pdd/errors.h"
#include "pdd/ingest.h"
#include "pdd/linker.h"
#include "test_util.h"

namespace pdd {
namespace {

using testing::ReadText;
using testing::TempDir;

const char *const kFiles[] = {"patients.csv",  "prescriptions.csv",  "diagnoses.csv",
                              "drug_kb.json",  "icd9_ontology.json", "gold_links.json"};

TEST(SyntheticTest, CleanProfileMentionsAreCanonicalNames) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(1, 50, 20, NoiseProfile::kClean);
  std::set<std::string> names, mentions;
  for (const auto &e : corpus.drug_kb) names.insert(e.canonical_name);
  for (const auto &p : corpus.prescriptions) mentions.insert(p.drug_name_raw);
  for (const auto &m : mentions) EXPECT_TRUE(names.count(m)) << m;
  EXPECT_EQ(corpus.gold_links.size(), mentions.size());
  for (const auto &[mention, gold] : corpus.gold_links) EXPECT_TRUE(gold.has_value()) << mention;
}

TEST(SyntheticTest, SameSeedGivesByteIdenticalFiles) {
  TempDir a, b;
  WriteSyntheticCorpus(GenerateSyntheticCorpus(42, 80, 30, NoiseProfile::kMimicLike), a.path());
  WriteSyntheticCorpus(GenerateSyntheticCorpus(42, 80, 30, NoiseProfile::kMimicLike), b.path());
  for (const char *file : kFiles) {
    std::string left = ReadText(a / file);
    EXPECT_FALSE(left.empty()) << file;
    EXPECT_EQ(left, ReadText(b / file)) << file;
  }
}

TEST(SyntheticTest, DifferentSeedsDiffer) {
  TempDir a, b;
  WriteSyntheticCorpus(GenerateSyntheticCorpus(1, 30, 10, NoiseProfile::kMimicLike), a.path());
  WriteSyntheticCorpus(GenerateSyntheticCorpus(2, 30, 10, NoiseProfile::kMimicLike), b.path());
  EXPECT_NE(ReadText(a / "prescriptions.csv"), ReadText(b / "prescriptions.csv"));
}

TEST(SyntheticTest, MimicLikeContainsInsignificantTokens) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(7, 500, 100, NoiseProfile::kMimicLike);
  // Independent substring scan over raw mentions.
  size_t hits = 0;
  for (const auto &p : corpus.prescriptions) {
    for (const char *token : {"10%", "200mg", "Glass Bottle", "Mini Bag Plus", "NS"}) {
      if (p.drug_name_raw.find(token) != std::string::npos) {
        ++hits;
        break;
      }
    }
  }
  EXPECT_GE(hits, 1u);
}

TEST(SyntheticTest, GoldCoversEveryMentionAndPointsIntoKb) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(7, 200, 50, NoiseProfile::kMimicLike);
  std::set<std::string> ids;
  for (const auto &e : corpus.drug_kb) ids.insert(e.kb_id);
  std::set<std::string> mentions;
  for (const auto &p : corpus.prescriptions) mentions.insert(p.drug_name_raw);
  EXPECT_EQ(corpus.gold_links.size(), mentions.size());
  for (const auto &m : mentions) {
    auto it = corpus.gold_links.find(m);
    ASSERT_NE(it, corpus.gold_links.end()) << m;
    if (it->second) {
      EXPECT_TRUE(ids.count(*it->second)) << m;
    }
  }
}

TEST(SyntheticTest, OntologyOmitsUnlinkableCodes) {
  SyntheticCorpus corpus = GenerateSyntheticCorpus(3, 300, 40, NoiseProfile::kMimicLike);
  EXPECT_TRUE(corpus.ontology.Contains("99592"));
  EXPECT_FALSE(corpus.ontology.Contains("71970"));
  EXPECT_FALSE(corpus.ontology.Contains("NULL"));
}

TEST(SyntheticTest, WrittenFilesLoadCleanly) {
  TempDir dir;
  SyntheticCorpus corpus = GenerateSyntheticCorpus(5, 100, 30, NoiseProfile::kMimicLike);
  WriteSyntheticCorpus(corpus, dir.path());
  auto patients = LoadPatients(dir / "patients.csv");
  EXPECT_TRUE(patients.rejects.empty());
  EXPECT_EQ(patients.records, corpus.patients);
  auto ids = PatientIds(patients.records);
  auto rx = LoadPrescriptions(dir / "prescriptions.csv", ids);
  EXPECT_TRUE(rx.rejects.empty());
  EXPECT_EQ(rx.records, corpus.prescriptions);
  auto dx = LoadDiagnoses(dir / "diagnoses.csv", ids);
  EXPECT_TRUE(dx.rejects.empty());
  EXPECT_EQ(dx.records, corpus.diagnoses);
  EXPECT_EQ(LoadDrugKb(dir / "drug_kb.json"), corpus.drug_kb);
  EXPECT_EQ(LoadIcd9Ontology(dir / "icd9_ontology.json").codes, corpus.ontology.codes);
}

TEST(SyntheticTest, RejectsNonPositiveCounts) {
  EXPECT_THROW(GenerateSyntheticCorpus(1, 10, 0, NoiseProfile::kClean), ConfigError);
  EXPECT_THROW(GenerateSyntheticCorpus(1, 0, 10, NoiseProfile::kClean), ConfigError);
}

TEST(NoiseProfileTest, NamesRoundTrip) {
  for (NoiseProfile p : {NoiseProfile::kClean, NoiseProfile::kMimicLike}) {
    EXPECT_EQ(ParseNoiseProfile(NoiseProfileName(p)), p);
  }
  EXPECT_EQ(NoiseProfileName(NoiseProfile::kMimicLike), "mimic_like");
  EXPECT_THROW(ParseNoiseProfile("noisy"), ConfigError);
}

}  // namespace
}  // namespace pdd
