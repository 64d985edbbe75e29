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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "pdd/errors.h"

namespace pdd {

namespace {

// Training corpus compiled to dense parameter indices. For each pair, slot
// [i * width + j] holds the parameter index of t(target_i | source_j) where
// source position 0 is NULL.
class CompiledCorpus {
 public:
  explicit CompiledCorpus(const std::vector<TrainingPair> &pairs) {
    std::unordered_map<std::string, int> source_ids = {
        {std::string(TranslationTable::kNullWord), 0}};
    source_words_.emplace_back(TranslationTable::kNullWord);
    std::unordered_map<std::string, int> target_ids;
    std::unordered_map<uint64_t, int> param_ids;

    for (const TrainingPair &pair : pairs) {
      Shape shape;
      shape.targets = pair.target.size();
      shape.width = pair.source.size() + 1;
      shape.offset = slots_.size();

      std::vector<int> sources = {0};
      for (const std::string &word : pair.source.tokens) {
        auto [it, inserted] = source_ids.emplace(word, source_words_.size());
        if (inserted) source_words_.push_back(word);
        sources.push_back(it->second);
      }
      for (const std::string &word : pair.target.tokens) {
        auto [it, inserted] = target_ids.emplace(word, target_words_.size());
        if (inserted) target_words_.push_back(word);
        int t = it->second;
        for (int s : sources) {
          uint64_t key = (static_cast<uint64_t>(s) << 32) | static_cast<uint32_t>(t);
          auto [param, added] = param_ids.emplace(key, param_source_.size());
          if (added) {
            param_source_.push_back(s);
            param_target_.push_back(t);
          }
          slots_.push_back(param->second);
        }
      }
      shapes_.push_back(shape);
    }
  }

  size_t num_params() const { return param_source_.size(); }
  size_t num_sources() const { return source_words_.size(); }
  size_t num_targets() const { return target_words_.size(); }

  // Accumulates expected counts under |probs| into |counts| and returns the
  // corpus log-likelihood.
  double ExpectationStep(const std::vector<double> &probs, std::vector<double> *counts) const {
    std::fill(counts->begin(), counts->end(), 0.0);
    double log_likelihood = 0.0;
    for (const Shape &shape : shapes_) {
      const int *row = slots_.data() + shape.offset;
      for (size_t i = 0; i < shape.targets; ++i, row += shape.width) {
        double total = 0.0;
        for (size_t j = 0; j < shape.width; ++j) total += probs[row[j]];
        if (!(total > 0.0)) return -std::numeric_limits<double>::infinity();
        log_likelihood += std::log(total);
        for (size_t j = 0; j < shape.width; ++j) (*counts)[row[j]] += probs[row[j]] / total;
      }
      log_likelihood -=
          static_cast<double>(shape.targets) * std::log(static_cast<double>(shape.width));
    }
    return log_likelihood;
  }

  // Renormalizes expected counts per source word into |probs|.
  void MaximizationStep(const std::vector<double> &counts, std::vector<double> *probs) const {
    std::vector<double> totals(num_sources(), 0.0);
    for (size_t k = 0; k < counts.size(); ++k) totals[param_source_[k]] += counts[k];
    for (size_t k = 0; k < counts.size(); ++k) {
      double total = totals[param_source_[k]];
      (*probs)[k] = total > 0.0 ? counts[k] / total : 0.0;
    }
  }

  TranslationTable ToTable(const std::vector<double> &probs, double epsilon) const {
    TranslationTable table;
    table.set_epsilon(epsilon);
    for (size_t k = 0; k < probs.size(); ++k) {
      table.Set(source_words_[param_source_[k]], target_words_[param_target_[k]], probs[k]);
    }
    return table;
  }

 private:
  struct Shape {
    size_t targets = 0;
    size_t width = 0;
    size_t offset = 0;
  };

  std::vector<std::string> source_words_;
  std::vector<std::string> target_words_;
  std::vector<int> param_source_;
  std::vector<int> param_target_;
  std::vector<int> slots_;
  std::vector<Shape> shapes_;
};

void ValidatePairs(const std::vector<TrainingPair> &pairs) {
  if (pairs.empty()) throw DataError("EM training set is empty");
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].source.empty() || pairs[i].target.empty()) {
      throw DataError("training pair " + std::to_string(i) + " ('" + pairs[i].source.raw +
                      "' -> '" + pairs[i].target.raw + "') has an empty token list");
    }
  }
}

}  // namespace

void EmConfig::Validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(log_likelihood_tolerance >= 0.0)) {
    throw ConfigError("log_likelihood_tolerance must be non-negative");
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must be in (0, 1]");
}

EmResult TrainEm(const std::vector<TrainingPair> &pairs, const EmConfig &config,
                 const EmObserver &observer) {
  config.Validate();
  ValidatePairs(pairs);

  CompiledCorpus corpus(pairs);
  // Only co-occurring pairs are materialized. Every other t(t|s) is zero
  // after the first M-step and never enters an E-step.
  std::vector<double> probs(corpus.num_params(),
                            1.0 / static_cast<double>(corpus.num_targets()));
  std::vector<double> counts(corpus.num_params(), 0.0);

  EmResult result;
  result.likelihood_trace.push_back(corpus.ExpectationStep(probs, &counts));
  for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
    corpus.MaximizationStep(counts, &probs);
    result.iterations = iteration;
    if (observer) observer(iteration, corpus.ToTable(probs, config.epsilon));

    double log_likelihood = corpus.ExpectationStep(probs, &counts);
    double gain = log_likelihood - result.likelihood_trace.back();
    result.likelihood_trace.push_back(log_likelihood);
    if (gain < config.log_likelihood_tolerance) {
      result.converged = true;
      break;
    }
  }
  result.table = corpus.ToTable(probs, config.epsilon);
  return result;
}

std::vector<TrainingPair> BuildTrainingPairs(const std::vector<DrugKbEntry> &kb) {
  std::vector<TrainingPair> pairs;
  for (const DrugKbEntry &entry : kb) {
    TokenizedName name = TokenizeName(entry.canonical_name);
    if (name.empty()) continue;
    pairs.push_back({name, name});
    for (const std::string &alias : entry.aliases) {
      TokenizedName target = TokenizeName(alias);
      if (!target.empty()) pairs.push_back({name, std::move(target)});
    }
  }
  return pairs;
}

double CorpusLogLikelihood(const std::vector<TrainingPair> &pairs,
                           const TranslationTable &table) {
  double total = 0.0;
  for (const TrainingPair &pair : pairs) {
    total += LogScoreWithoutEpsilon(EncodeMention(pair.target, table),
                                    EncodeCandidate(pair.source, table), table);
  }
  return total;
}

std::vector<std::vector<double>> AlignmentPosteriors(const TokenizedName &source,
                                                     const TokenizedName &target,
                                                     const TranslationTable &table) {
  std::vector<std::vector<double>> posteriors;
  for (const std::string &word : target.tokens) {
    std::vector<double> row = {table.Get(TranslationTable::kNullWord, word)};
    for (const std::string &s : source.tokens) row.push_back(table.Get(s, word));
    double total = 0.0;
    for (double p : row) total += p;
    for (double &p : row) p = total > 0.0 ? p / total : 0.0;
    posteriors.push_back(std::move(row));
  }
  return posteriors;
}

EncodedName EncodeMention(const TokenizedName &mention, const TranslationTable &table) {
  EncodedName encoded;
  for (const std::string &word : mention.tokens) encoded.ids.push_back(table.TargetId(word));
  return encoded;
}

EncodedName EncodeCandidate(const TokenizedName &candidate, const TranslationTable &table) {
  EncodedName encoded;
  for (const std::string &word : candidate.tokens) encoded.ids.push_back(table.SourceId(word));
  return encoded;
}

double LogScoreWithoutEpsilon(const EncodedName &mention, const EncodedName &candidate,
                              const TranslationTable &table) {
  double log_score = -static_cast<double>(mention.size()) *
                     std::log(static_cast<double>(candidate.size() + 1));
  for (int w : mention.ids) {
    double mass;
    if (w == TranslationTable::kUnknown) {
      mass = kUnknownWordFloor;
    } else {
      mass = table.Prob(TranslationTable::kNullId, w);
      for (int v : candidate.ids) {
        if (v != TranslationTable::kUnknown) mass += table.Prob(v, w);
      }
    }
    if (!(mass > 0.0)) return -std::numeric_limits<double>::infinity();
    log_score += std::log(mass);
  }
  return log_score;
}

double LogScore(const TokenizedName &mention, const TokenizedName &candidate,
                const TranslationTable &table, double epsilon) {
  if (mention.empty() || candidate.empty()) {
    throw std::invalid_argument("cannot score an empty name");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return std::log(epsilon) + LogScoreWithoutEpsilon(EncodeMention(mention, table),
                                                    EncodeCandidate(candidate, table), table);
}

double Score(const TokenizedName &mention, const TokenizedName &candidate,
             const TranslationTable &table, double epsilon) {
  return std::exp(LogScore(mention, candidate, table, epsilon));
}

}  // namespace pdd
