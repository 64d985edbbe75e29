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

#ifndef PDD_TRANSLATION_TABLE_H_
#define PDD_TRANSLATION_TABLE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pdd {

// Lexical translation probabilities t(target word | source word). Source
// words are knowledge-base name words plus the NULL word; target words are
// words observed in aliases and mentions.
//
// Words are interned to dense ids so scoring can resolve a name once and do
// integer lookups afterwards.
class TranslationTable {
 public:
  static constexpr std::string_view kNullWord = "<NULL>";
  static constexpr int kNullId = 0;
  static constexpr int kUnknown = -1;

  struct Entry {
    std::string source;
    std::string target;
    double prob = 0.0;

    bool operator==(const Entry &other) const = default;
  };

  TranslationTable();

  // Inserts or overwrites t(target | source).
  void Set(std::string_view source, std::string_view target, double prob);

  // t(target | source), 0 when the pair is absent.
  double Get(std::string_view source, std::string_view target) const;

  int SourceId(std::string_view word) const;
  int TargetId(std::string_view word) const;
  double Prob(int source_id, int target_id) const {
    auto it = probs_.find(Key(source_id, target_id));
    return it == probs_.end() ? 0.0 : it->second;
  }

  bool HasTarget(std::string_view word) const { return TargetId(word) != kUnknown; }

  // Sorted vocabularies; the source vocabulary always contains the NULL word.
  std::vector<std::string> SourceVocab() const;
  std::vector<std::string> TargetVocab() const;

  // All stored entries sorted by (source, target).
  std::vector<Entry> Entries() const;
  size_t size() const { return probs_.size(); }

  // Largest |sum_t t(t|s) - 1| over source words that have entries, and the
  // NULL word even when it has none.
  double MaxNormalizationError() const;

  double epsilon() const { return epsilon_; }
  void set_epsilon(double epsilon) { epsilon_ = epsilon; }

  // Exact comparison of epsilon and every entry.
  bool operator==(const TranslationTable &other) const;

 private:
  static uint64_t Key(int source_id, int target_id) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(source_id)) << 32) |
           static_cast<uint32_t>(target_id);
  }

  int InternSource(std::string_view word);
  int InternTarget(std::string_view word);

  std::vector<std::string> source_words_;
  std::unordered_map<std::string, int> source_index_;
  std::vector<std::string> target_words_;
  std::unordered_map<std::string, int> target_index_;
  std::unordered_map<uint64_t, double> probs_;
  double epsilon_ = 1.0;
};

// JSON table file: {"epsilon": e, "entries": [{"source","target","prob"}]}
// with entries sorted by (source, target). Doubles are written in shortest
// round-trip form, so save -> load -> save is byte-identical.
std::string TableToJson(const TranslationTable &table);
void SaveTable(const TranslationTable &table, const std::filesystem::path &path);

// Throws DataError on malformed input, duplicate pairs, probabilities outside
// [0, 1], a missing NULL word, NULL used as a target, or any source whose
// probabilities do not sum to 1 within 1e-9.
TranslationTable ParseTable(std::string_view json_text);
TranslationTable LoadTable(const std::filesystem::path &path);

inline constexpr double kNormalizationTolerance = 1e-9;

}  // namespace pdd

#endif  // PDD_TRANSLATION_TABLE_H_
