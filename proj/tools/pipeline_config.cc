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

#include "pipeline_config.h"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pdd/errors.h"

namespace pdd {

using json = nlohmann::json;

namespace {

void CheckKeys(const json &object, const std::set<std::string> &allowed,
               const std::string &where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto &[key, value] : object.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void Read(const json &object, const char *key, T *out, const std::string &where) {
  auto it = object.find(key);
  if (it == object.end()) return;
  try {
    *out = it->get<T>();
  } catch (const json::exception &) {
    throw ConfigError("config key '" + where + "." + key + "' has the wrong type");
  }
}

void ReadPath(const json &object, const char *key, std::filesystem::path *out,
              const std::filesystem::path &base_dir) {
  std::string text;
  Read(object, key, &text, "config");
  if (text.empty()) return;
  std::filesystem::path path(text);
  *out = path.is_absolute() ? path : base_dir / path;
}

}  // namespace

std::filesystem::path PipelineConfig::TablePath() const {
  return table.empty() ? output_dir / "translation_table.json" : table;
}

std::filesystem::path PipelineConfig::DecisionsPath() const {
  return decisions.empty() ? output_dir / "link_decisions.jsonl" : decisions;
}

PipelineConfig ParsePipelineConfig(std::string_view json_text,
                                   const std::filesystem::path &base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  CheckKeys(root,
            {"patients", "prescriptions", "diagnoses", "drug_kb", "icd9_ontology", "gold",
             "table", "decisions", "output_dir", "em", "linker", "graph"},
            "config");

  PipelineConfig config;
  ReadPath(root, "patients", &config.patients, base_dir);
  ReadPath(root, "prescriptions", &config.prescriptions, base_dir);
  ReadPath(root, "diagnoses", &config.diagnoses, base_dir);
  ReadPath(root, "drug_kb", &config.drug_kb, base_dir);
  ReadPath(root, "icd9_ontology", &config.icd9_ontology, base_dir);
  ReadPath(root, "gold", &config.gold, base_dir);
  ReadPath(root, "table", &config.table, base_dir);
  ReadPath(root, "decisions", &config.decisions, base_dir);
  ReadPath(root, "output_dir", &config.output_dir, base_dir);

  if (auto em = root.find("em"); em != root.end()) {
    CheckKeys(*em, {"max_iterations", "log_likelihood_tolerance", "epsilon"}, "em");
    Read(*em, "max_iterations", &config.em.max_iterations, "em");
    Read(*em, "log_likelihood_tolerance", &config.em.log_likelihood_tolerance, "em");
    Read(*em, "epsilon", &config.em.epsilon, "em");
  }
  if (auto linker = root.find("linker"); linker != root.end()) {
    CheckKeys(*linker, {"k", "score_floor", "dosage_tolerance"}, "linker");
    Read(*linker, "k", &config.linker.k, "linker");
    Read(*linker, "score_floor", &config.linker.score_floor, "linker");
    Read(*linker, "dosage_tolerance", &config.linker.dosage_tolerance, "linker");
  }
  if (auto graph = root.find("graph"); graph != root.end()) {
    CheckKeys(*graph, {"namespace", "drug_kb_iri_prefix", "icd9_iri_prefix"}, "graph");
    Read(*graph, "namespace", &config.graph.ns, "graph");
    Read(*graph, "drug_kb_iri_prefix", &config.graph.drug_kb_iri_prefix, "graph");
    Read(*graph, "icd9_iri_prefix", &config.graph.icd9_iri_prefix, "graph");
  }
  return config;
}

PipelineConfig LoadPipelineConfig(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return ParsePipelineConfig(text.str(), path.parent_path());
}

void RequireFile(const std::filesystem::path &path, std::string_view what) {
  if (path.empty()) throw ConfigError("no " + std::string(what) + " path configured");
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("missing " + std::string(what) + " file: " + path.string());
  }
}

}  // namespace pdd
