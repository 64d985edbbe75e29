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

#include "pdd/enm.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "oracle/oracles.h"
#include "pdd/errors.h"
#include "pdd/translation_table.h"
#include "test_util.h"

namespace pdd {
namespace {

TrainingPair Pair(const std::string &source, const std::string &target) {
  return {TokenizeName(source), TokenizeName(target)};
}

std::vector<oracle::WordPair> ToWords(const std::vector<TrainingPair> &pairs) {
  std::vector<oracle::WordPair> out;
  for (const auto &p : pairs) out.emplace_back(p.source.tokens, p.target.tokens);
  return out;
}

EmConfig FixedIterations(int n) {
  EmConfig config;
  config.max_iterations = n;
  config.log_likelihood_tolerance = 0.0;
  return config;
}

void ExpectTablesMatch(const TranslationTable &table, const oracle::DenseTable &expected,
                       double tolerance) {
  for (const auto &[key, prob] : expected) {
    EXPECT_NEAR(table.Get(key.first, key.second), prob, tolerance)
        << "t(" << key.second << "|" << key.first << ")";
  }
  for (const auto &entry : table.Entries()) {
    EXPECT_TRUE(expected.count({entry.source, entry.target}))
        << entry.source << " -> " << entry.target;
  }
}

// Random corpora of up to |max_pairs| pairs with names of up to
// |max_tokens| tokens over a small vocabulary, so words recur.
std::vector<TrainingPair> RandomCorpus(std::mt19937 &rng, int max_pairs, int max_tokens) {
  static const char *kSource[] = {"a", "b", "c", "d"};
  static const char *kTarget[] = {"x", "y", "z", "w"};
  std::vector<TrainingPair> pairs(1 + rng() % max_pairs);
  for (auto &p : pairs) {
    int ls = 1 + static_cast<int>(rng() % max_tokens);
    int lt = 1 + static_cast<int>(rng() % max_tokens);
    std::string s, t;
    for (int i = 0; i < ls; ++i) s += std::string(i ? " " : "") + kSource[rng() % 4];
    for (int i = 0; i < lt; ++i) t += std::string(i ? " " : "") + kTarget[rng() % 4];
    p = Pair(s, t);
  }
  return pairs;
}

TEST(TrainEmTest, SingleIdentityPair) {
  // Per-source normalization leaves one target word, so both t values are 1;
  // the symmetric split shows up in the alignment posterior instead.
  EmResult result = TrainEm({Pair("glucose", "glucose")}, EmConfig{});
  EXPECT_DOUBLE_EQ(result.table.Get("glucose", "glucose"), 1.0);
  EXPECT_DOUBLE_EQ(result.table.Get(TranslationTable::kNullWord, "glucose"), 1.0);
  auto posteriors =
      AlignmentPosteriors(TokenizeName("glucose"), TokenizeName("glucose"), result.table);
  ASSERT_EQ(posteriors.size(), 1u);
  EXPECT_DOUBLE_EQ(posteriors[0][0], 0.5);
  EXPECT_DOUBLE_EQ(posteriors[0][1], 0.5);
}

TEST(TrainEmTest, TwoPairExampleMatchesExternalReference) {
  // Reference values from a separate brute-force implementation.
  std::vector<TrainingPair> pairs = {Pair("a", "x"), Pair("a b", "x y")};
  EmResult result = TrainEm(pairs, FixedIterations(10));
  const std::string null(TranslationTable::kNullWord);
  EXPECT_NEAR(result.table.Get(null, "x"), 0.949035611217793, 1e-12);
  EXPECT_NEAR(result.table.Get(null, "y"), 0.050964388782207, 1e-12);
  EXPECT_NEAR(result.table.Get("a", "x"), 0.949035611217793, 1e-12);
  EXPECT_NEAR(result.table.Get("a", "y"), 0.050964388782207, 1e-12);
  EXPECT_NEAR(result.table.Get("b", "x"), 0.009061788570603, 1e-12);
  EXPECT_NEAR(result.table.Get("b", "y"), 0.990938211429397, 1e-12);
  EXPECT_GT(result.table.Get("a", "x"), result.table.Get("a", "y"));

  const std::vector<double> trace = {
      -2.079441541679836, -1.8079244060814106, -1.7228408866573195, -1.6580061032483628,
      -1.6107884559535632, -1.5772747374863128, -1.5539294543609317, -1.5379289371248102,
      -1.527120317160216,  -1.5199056770902706, -1.5151279521313743};
  ASSERT_EQ(result.likelihood_trace.size(), trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    EXPECT_NEAR(result.likelihood_trace[i], trace[i], 1e-12) << i;
  }
  EXPECT_EQ(result.iterations, 10);
}

TEST(TrainEmTest, MatchesEnumerationOracleOnSmallCorpora) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto pairs = RandomCorpus(rng, 3, 3);
    int iterations = 1 + static_cast<int>(rng() % 8);
    EmResult result = TrainEm(pairs, FixedIterations(iterations));
    oracle::EmTrace expected = oracle::BruteForceEm(ToWords(pairs), iterations);
    ExpectTablesMatch(result.table, expected.table, 1e-9);
    ASSERT_EQ(result.likelihood_trace.size(), expected.log_likelihood.size());
    for (size_t i = 0; i < expected.log_likelihood.size(); ++i) {
      EXPECT_NEAR(result.likelihood_trace[i], expected.log_likelihood[i], 1e-9);
    }
    for (const auto &p : pairs) {
      auto got = AlignmentPosteriors(p.source, p.target, result.table);
      auto want = oracle::BruteForcePosteriors(p.source.tokens, p.target.tokens, result.table);
      ASSERT_EQ(got.size(), want.size());
      for (size_t i = 0; i < got.size(); ++i) {
        for (size_t j = 0; j < got[i].size(); ++j) EXPECT_NEAR(got[i][j], want[i][j], 1e-9);
      }
    }
    if (HasFailure()) return;
  }
}

TEST(TrainEmTest, LikelihoodTraceIsMonotone) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    auto pairs = RandomCorpus(rng, 6, 4);
    EmResult result = TrainEm(pairs, FixedIterations(30));
    for (size_t i = 1; i < result.likelihood_trace.size(); ++i) {
      ASSERT_GE(result.likelihood_trace[i], result.likelihood_trace[i - 1] - 1e-9) << trial;
    }
  }
}

TEST(TrainEmTest, NormalizedAfterEveryIteration) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    int calls = 0;
    auto pairs = RandomCorpus(rng, 8, 4);
    EmResult result = TrainEm(pairs, FixedIterations(15), [&](int iteration, const auto &table) {
      EXPECT_EQ(iteration, ++calls);
      EXPECT_LE(table.MaxNormalizationError(), kNormalizationTolerance);
      EXPECT_NE(table.SourceId(TranslationTable::kNullWord), TranslationTable::kUnknown);
    });
    EXPECT_EQ(calls, result.iterations);
  }
}

TEST(TrainEmTest, InitialTraceEntryUsesUniformTable) {
  std::vector<TrainingPair> pairs = {Pair("a b", "x y z")};
  EmResult result = TrainEm(pairs, FixedIterations(1));
  // Uniform 1/3 over three target words: log((3 * 1/3)^3 / 3^3).
  EXPECT_NEAR(result.likelihood_trace[0], -3.0 * std::log(3.0), 1e-12);
}

TEST(TrainEmTest, StopsOnToleranceBeforeMaxIterations) {
  EmConfig config;
  config.max_iterations = 50;
  config.log_likelihood_tolerance = 1e-4;
  EmResult result = TrainEm({Pair("glucose", "glucose")}, config);
  EXPECT_TRUE(result.converged);
  EXPECT_LT(result.iterations, 50);
  EXPECT_EQ(result.likelihood_trace.size(), static_cast<size_t>(result.iterations) + 1);
}

TEST(TrainEmTest, RejectsBadInput) {
  EXPECT_THROW(TrainEm({}, EmConfig{}), DataError);
  EXPECT_THROW(TrainEm({Pair("a", "  ")}, EmConfig{}), DataError);
  EmConfig bad;
  bad.max_iterations = 0;
  EXPECT_THROW(TrainEm({Pair("a", "x")}, bad), ConfigError);
}

TEST(BuildTrainingPairsTest, IdentityPlusAliases) {
  std::vector<DrugKbEntry> kb = {{"DB09341", "Dextrose", {"Glucose", "D-Glucose"}, {}, {}}};
  auto pairs = BuildTrainingPairs(kb);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].target.raw, "Dextrose");
  EXPECT_EQ(pairs[1].target.raw, "Glucose");
  EXPECT_EQ(pairs[2].target.raw, "D-Glucose");
  for (const auto &p : pairs) EXPECT_EQ(p.source.raw, "Dextrose");
}

TranslationTable DextroseTable() {
  TranslationTable table;
  table.Set("glucose", "dextrose", 0.8);
  table.Set(TranslationTable::kNullWord, "dextrose", 0.0);
  table.Set(TranslationTable::kNullWord, "5%", 0.6);
  table.Set("glucose", "5%", 0.0);
  return table;
}

TEST(ScoreTest, DextroseExample) {
  double score =
      Score(TokenizeName("Dextrose 5%"), TokenizeName("Glucose"), DextroseTable(), 1.0);
  EXPECT_NEAR(score, 0.12, 1e-12);
}

TEST(ScoreTest, SingleWordIdentity) {
  TranslationTable table;
  table.Set("aspirin", "aspirin", 1.0);
  table.Set(TranslationTable::kNullWord, "aspirin", 0.0);
  EXPECT_NEAR(Score(TokenizeName("aspirin"), TokenizeName("aspirin"), table, 1.0), 0.5, 1e-15);
}

TEST(ScoreTest, EpsilonScalesLinearly) {
  auto m = TokenizeName("Dextrose 5%");
  auto d = TokenizeName("Glucose");
  EXPECT_NEAR(Score(m, d, DextroseTable(), 0.25), 0.03, 1e-12);
}

TEST(ScoreTest, UnknownMentionWordGetsFloor) {
  TranslationTable table;
  table.Set("aspirin", "aspirin", 1.0);
  table.Set(TranslationTable::kNullWord, "aspirin", 1.0);
  double score = Score(TokenizeName("aspirin bottle"), TokenizeName("aspirin"), table, 1.0);
  EXPECT_NEAR(score, 2.0 * kUnknownWordFloor / 4.0, 1e-18);
  EXPECT_GT(score, 0.0);
}

TEST(ScoreTest, ZeroMassGivesZero) {
  EXPECT_EQ(Score(TokenizeName("dextrose"), TokenizeName("aspirin"), DextroseTable(), 1.0), 0.0);
  EXPECT_EQ(Score(TokenizeName("5% dextrose"), TokenizeName("other"), DextroseTable(), 1.0), 0.0);
}

TEST(ScoreTest, RejectsEmptyNamesAndBadEpsilon) {
  auto table = DextroseTable();
  EXPECT_THROW(Score(TokenizeName(" "), TokenizeName("a"), table, 1.0), std::invalid_argument);
  EXPECT_THROW(Score(TokenizeName("a"), TokenizeName(""), table, 1.0), std::invalid_argument);
  EXPECT_THROW(Score(TokenizeName("a"), TokenizeName("a"), table, 0.0), std::invalid_argument);
}

// A normalized random table over small vocabularies.
TranslationTable RandomTable(std::mt19937 &rng, const std::vector<std::string> &sources,
                             const std::vector<std::string> &targets) {
  TranslationTable table;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> all = sources;
  all.push_back(std::string(TranslationTable::kNullWord));
  for (const auto &s : all) {
    std::vector<double> w(targets.size());
    double sum = 0.0;
    for (double &x : w) sum += (x = u(rng));
    for (size_t i = 0; i < targets.size(); ++i) table.Set(s, targets[i], w[i] / sum);
  }
  return table;
}

std::vector<std::string> RandomWords(std::mt19937 &rng, const std::vector<std::string> &vocab,
                                     int max_len) {
  std::vector<std::string> out(1 + rng() % max_len);
  for (auto &w : out) w = vocab[rng() % vocab.size()];
  return out;
}

std::string Join(const std::vector<std::string> &words) {
  std::string out;
  for (const auto &w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

const std::vector<std::string> kSources = {"s1", "s2", "s3", "s4"};
const std::vector<std::string> kTargets = {"t1", "t2", "t3", "t4", "t5"};

TEST(ScorePropertyTest, LengthPenaltyIsStrict) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    TranslationTable table = RandomTable(rng, kSources, kTargets);
    table.Set("zz", "unused", 1.0);  // a source word with no mass on mention words
    auto m = TokenizeName(Join(RandomWords(rng, kTargets, 4)));
    auto words = RandomWords(rng, kSources, 3);
    auto d = TokenizeName(Join(words));
    words.push_back("zz");
    auto longer = TokenizeName(Join(words));
    ASSERT_LT(Score(m, longer, table, 1.0), Score(m, d, table, 1.0)) << m.raw << " / " << d.raw;
  }
}

TEST(ScorePropertyTest, MatchesDirectFormulaAndStaysInBounds) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    TranslationTable table = RandomTable(rng, kSources, kTargets);
    auto mw = RandomWords(rng, {"t1", "t2", "t3", "t4", "t5", "unseen"}, 5);
    auto dw = RandomWords(rng, {"s1", "s2", "s3", "s4", "other"}, 4);
    double eps = std::uniform_real_distribution<double>(0.01, 10.0)(rng);
    double score = Score(TokenizeName(Join(mw)), TokenizeName(Join(dw)), table, eps);
    long double direct = oracle::DirectScore(mw, dw, table, eps);
    ASSERT_NEAR(score, static_cast<double>(direct), 1e-12 * eps);
    ASSERT_GE(score, 0.0);
    ASSERT_LE(score, eps);
  }
}

TEST(ScorePropertyTest, NullOnlyTokenFactorsOutIncrementally) {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    TranslationTable table = RandomTable(rng, kSources, kTargets);
    // "noise" is reachable only from NULL.
    double p = std::uniform_real_distribution<double>(0.05, 0.9)(rng);
    table.Set(TranslationTable::kNullWord, "noise", p);
    auto mw = RandomWords(rng, kTargets, 4);
    auto dw = RandomWords(rng, kSources, 3);
    double base = Score(TokenizeName(Join(mw)), TokenizeName(Join(dw)), table, 1.0);
    mw.push_back("noise");
    double extended = Score(TokenizeName(Join(mw)), TokenizeName(Join(dw)), table, 1.0);
    double incremental = base * p / static_cast<double>(dw.size() + 1);
    ASSERT_NEAR(extended, incremental, 1e-12 * std::max(incremental, 1e-300));
  }
}

TEST(TranslationTableTest, SaveLoadRoundTripIsExact) {
  testing::TempDir dir;
  std::vector<TrainingPair> pairs = {Pair("dextrose", "glucose"), Pair("dextrose", "dextrose 5%"),
                                     Pair("aspirin", "aspirin 81mg")};
  EmResult result = TrainEm(pairs, EmConfig{});
  SaveTable(result.table, dir / "t.json");
  TranslationTable loaded = LoadTable(dir / "t.json");
  EXPECT_TRUE(loaded == result.table);
  for (const auto &e : result.table.Entries()) {
    EXPECT_EQ(loaded.Get(e.source, e.target), e.prob);  // bitwise, not approximate
  }
}

TEST(TranslationTableTest, LoadRejectsUnnormalizedSource) {
  EXPECT_THROW(ParseTable(R"({"epsilon":1,"entries":[
      {"source":"<NULL>","target":"x","prob":1.0},
      {"source":"a","target":"x","prob":0.5},
      {"source":"a","target":"y","prob":0.4}]})"),
               DataError);
}

TEST(TranslationTableTest, LoadRejectsMalformedTables) {
  EXPECT_THROW(ParseTable("not json"), DataError);
  EXPECT_THROW(ParseTable(R"({"entries":[{"source":"a","target":"x","prob":1.0}]})"), DataError);
  EXPECT_THROW(ParseTable(R"({"entries":[{"source":"<NULL>","target":"x","prob":1.5}]})"),
               DataError);
  EXPECT_THROW(ParseTable(R"({"entries":[{"source":"<NULL>","target":"<NULL>","prob":1.0}]})"),
               DataError);
  EXPECT_THROW(ParseTable(R"({"entries":[{"source":"<NULL>","target":"x","prob":0.5},
                                          {"source":"<NULL>","target":"x","prob":0.5}]})"),
               DataError);
}

TEST(TranslationTableTest, HundredThousandEntriesResaveByteIdentically) {
  testing::TempDir dir;
  TranslationTable table;
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int kSourcesCount = 1000, kPerSource = 100;
  for (int s = 0; s <= kSourcesCount; ++s) {
    std::string source = s == kSourcesCount ? std::string(TranslationTable::kNullWord)
                                            : "src" + std::to_string(s);
    std::vector<double> w(kPerSource);
    double sum = 0.0;
    for (double &x : w) sum += (x = u(rng));
    for (int t = 0; t < kPerSource; ++t) {
      table.Set(source, "tgt" + std::to_string((s * 7 + t) % 5000), w[t] / sum);
    }
  }
  ASSERT_GE(table.size(), 100000u);
  SaveTable(table, dir / "a.json");
  SaveTable(LoadTable(dir / "a.json"), dir / "b.json");
  std::string a = testing::ReadText(dir / "a.json");
  EXPECT_EQ(a, testing::ReadText(dir / "b.json"));
  // Independent entry count: occurrences of the prob key.
  size_t probs = 0;
  for (size_t pos = a.find("\"prob\""); pos != std::string::npos; pos = a.find("\"prob\"", pos + 1)) {
    ++probs;
  }
  EXPECT_EQ(probs, table.size());
}

}  // namespace
}  // namespace pdd
