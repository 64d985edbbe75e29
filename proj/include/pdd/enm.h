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

#ifndef PDD_ENM_H_
#define PDD_ENM_H_

#include <functional>
#include <vector>

#include "pdd/normalize.h"
#include "pdd/records.h"
#include "pdd/translation_table.h"

namespace pdd {

// The entity name model. A mention m is treated as a word-by-word translation
// of a knowledge-base name d, each mention word produced by one word of d or
// by NULL (an omitted, insignificant word):
//
//   P(m | d) = eps / (l_d + 1)^l_m * prod_{w in m} sum_{v in d + NULL} t(w | v)
//
// The lexical probabilities t are trained with Model-1 EM on (KB name, alias)
// pairs.

// source: a knowledge-base name; target: an alias or mention of it.
struct TrainingPair {
  TokenizedName source;
  TokenizedName target;
};

struct EmConfig {
  int max_iterations = 50;
  double log_likelihood_tolerance = 1e-4;  // 0 runs exactly max_iterations
  double epsilon = 1.0;

  // Throws ConfigError when a field is out of range.
  void Validate() const;
};

struct EmResult {
  TranslationTable table;
  // Corpus log-likelihood of the initial parameters followed by the value
  // after each iteration; size() == iterations + 1.
  std::vector<double> likelihood_trace;
  int iterations = 0;
  bool converged = false;
};

// Called after every M-step with the 1-based iteration number.
using EmObserver = std::function<void(int iteration, const TranslationTable &table)>;

// Model-1 EM from a uniform start over the target vocabulary. Stops after
// config.max_iterations or once an iteration improves the log-likelihood by
// less than config.log_likelihood_tolerance. Throws DataError on an empty
// corpus or a pair with an empty side.
EmResult TrainEm(const std::vector<TrainingPair> &pairs, const EmConfig &config,
                 const EmObserver &observer = nullptr);

// Training corpus for a knowledge base: each canonical name paired with
// itself (so retained words are learned) and with each of its aliases.
std::vector<TrainingPair> BuildTrainingPairs(const std::vector<DrugKbEntry> &kb);

// sum over pairs of log P(target | source) with eps = 1.
double CorpusLogLikelihood(const std::vector<TrainingPair> &pairs,
                           const TranslationTable &table);

// Posterior alignment probabilities for one pair: result[i][j] is the
// probability that target word i was produced by source position j, where
// j = 0 is NULL and j = k is source word k.
std::vector<std::vector<double>> AlignmentPosteriors(const TokenizedName &source,
                                                     const TokenizedName &target,
                                                     const TranslationTable &table);

// Probability t(w | NULL) given to a mention word the table has never seen.
inline constexpr double kUnknownWordFloor = 1e-6;

// A name resolved against a table's vocabulary. Mention words index target
// ids, candidate words index source ids; kUnknown marks absent words.
struct EncodedName {
  std::vector<int> ids;
  size_t size() const { return ids.size(); }
};

EncodedName EncodeMention(const TokenizedName &mention, const TranslationTable &table);
EncodedName EncodeCandidate(const TokenizedName &candidate, const TranslationTable &table);

// log P(m | d) / eps, i.e. the score without the normalization factor.
// Returns -infinity when some mention word has no translation mass.
double LogScoreWithoutEpsilon(const EncodedName &mention, const EncodedName &candidate,
                              const TranslationTable &table);

// Natural log of P(m | d). Throws std::invalid_argument on empty names or a
// non-positive epsilon.
double LogScore(const TokenizedName &mention, const TokenizedName &candidate,
                const TranslationTable &table, double epsilon);

// P(m | d) on the linear scale; computed in log space.
double Score(const TokenizedName &mention, const TokenizedName &candidate,
             const TranslationTable &table, double epsilon);

}  // namespace pdd

#endif  // PDD_ENM_H_
