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

#include "pdd/translation_table.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"
#include "pdd/errors.h"
#include "pdd/ingest.h"

namespace pdd {

using json = nlohmann::json;

TranslationTable::TranslationTable() { InternSource(kNullWord); }

int TranslationTable::InternSource(std::string_view word) {
  auto [it, inserted] = source_index_.emplace(std::string(word), source_words_.size());
  if (inserted) source_words_.emplace_back(word);
  return it->second;
}

int TranslationTable::InternTarget(std::string_view word) {
  auto [it, inserted] = target_index_.emplace(std::string(word), target_words_.size());
  if (inserted) target_words_.emplace_back(word);
  return it->second;
}

int TranslationTable::SourceId(std::string_view word) const {
  auto it = source_index_.find(std::string(word));
  return it == source_index_.end() ? kUnknown : it->second;
}

int TranslationTable::TargetId(std::string_view word) const {
  auto it = target_index_.find(std::string(word));
  return it == target_index_.end() ? kUnknown : it->second;
}

void TranslationTable::Set(std::string_view source, std::string_view target, double prob) {
  int s = InternSource(source);
  int t = InternTarget(target);
  probs_[Key(s, t)] = prob;
}

double TranslationTable::Get(std::string_view source, std::string_view target) const {
  int s = SourceId(source);
  int t = TargetId(target);
  if (s == kUnknown || t == kUnknown) return 0.0;
  return Prob(s, t);
}

std::vector<std::string> TranslationTable::SourceVocab() const {
  std::vector<std::string> words = source_words_;
  std::sort(words.begin(), words.end());
  return words;
}

std::vector<std::string> TranslationTable::TargetVocab() const {
  std::vector<std::string> words = target_words_;
  std::sort(words.begin(), words.end());
  return words;
}

std::vector<TranslationTable::Entry> TranslationTable::Entries() const {
  std::vector<Entry> entries;
  entries.reserve(probs_.size());
  for (const auto &[key, prob] : probs_) {
    entries.push_back({source_words_[key >> 32], target_words_[key & 0xffffffffu], prob});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  return entries;
}

double TranslationTable::MaxNormalizationError() const {
  std::vector<double> mass(source_words_.size(), 0.0);
  std::vector<bool> present(source_words_.size(), false);
  present[kNullId] = true;
  for (const auto &[key, prob] : probs_) {
    mass[key >> 32] += prob;
    present[key >> 32] = true;
  }
  double worst = 0.0;
  for (size_t s = 0; s < mass.size(); ++s) {
    if (present[s]) worst = std::max(worst, std::abs(mass[s] - 1.0));
  }
  return worst;
}

bool TranslationTable::operator==(const TranslationTable &other) const {
  return epsilon_ == other.epsilon_ && Entries() == other.Entries();
}

std::string TableToJson(const TranslationTable &table) {
  json entries = json::array();
  for (const TranslationTable::Entry &e : table.Entries()) {
    entries.push_back({{"source", e.source}, {"target", e.target}, {"prob", e.prob}});
  }
  json root = {{"epsilon", table.epsilon()}, {"entries", std::move(entries)}};
  return root.dump(1) + "\n";
}

void SaveTable(const TranslationTable &table, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << TableToJson(table);
  if (!out) throw DataError("write failed for " + path.string());
}

TranslationTable ParseTable(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw DataError(std::string("translation table: ") + e.what());
  }
  if (!root.is_object() || !root.contains("entries") || !root["entries"].is_array()) {
    throw DataError("translation table: expected an object with an 'entries' array");
  }

  TranslationTable table;
  if (auto it = root.find("epsilon"); it != root.end()) {
    if (!it->is_number() || !(it->get<double>() > 0.0)) {
      throw DataError("translation table: epsilon must be a positive number");
    }
    table.set_epsilon(it->get<double>());
  }

  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, double> mass;
  for (const json &entry : root["entries"]) {
    if (!entry.is_object() || !entry.contains("source") || !entry.contains("target") ||
        !entry.contains("prob") || !entry["source"].is_string() ||
        !entry["target"].is_string() || !entry["prob"].is_number()) {
      throw DataError("translation table: malformed entry " + entry.dump());
    }
    std::string source = entry["source"].get<std::string>();
    std::string target = entry["target"].get<std::string>();
    double prob = entry["prob"].get<double>();
    if (source.empty() || target.empty()) {
      throw DataError("translation table: empty word in entry " + entry.dump());
    }
    if (target == TranslationTable::kNullWord) {
      throw DataError("translation table: NULL cannot be a target word");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
      throw DataError("translation table: probability outside [0, 1] in " + entry.dump());
    }
    if (!seen.emplace(source, target).second) {
      throw DataError("translation table: duplicate pair (" + source + ", " + target + ")");
    }
    mass[source] += prob;
    table.Set(source, target, prob);
  }

  if (mass.count(std::string(TranslationTable::kNullWord)) == 0) {
    throw DataError("translation table: no entries for the NULL word");
  }
  for (const auto &[source, total] : mass) {
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      throw DataError("translation table: probabilities for '" + source + "' sum to " +
                      FormatDecimal(total));
    }
  }
  return table;
}

TranslationTable LoadTable(const std::filesystem::path &path) {
  std::string text = ReadFileToString(path);
  try {
    return ParseTable(text);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace pdd
