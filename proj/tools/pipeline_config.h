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

#ifndef PDD_TOOLS_PIPELINE_CONFIG_H_
#define PDD_TOOLS_PIPELINE_CONFIG_H_

#include <filesystem>
#include <string_view>

#include "pdd/enm.h"
#include "pdd/graph.h"
#include "pdd/linker.h"

namespace pdd {

// Everything a pipeline run needs. Loaded from a JSON config file, then
// overridden by command-line flags.
struct PipelineConfig {
  std::filesystem::path patients;
  std::filesystem::path prescriptions;
  std::filesystem::path diagnoses;
  std::filesystem::path drug_kb;
  std::filesystem::path icd9_ontology;
  std::filesystem::path gold;
  std::filesystem::path table;      // default: <output_dir>/translation_table.json
  std::filesystem::path decisions;  // default: <output_dir>/link_decisions.jsonl
  std::filesystem::path output_dir = "out";

  EmConfig em;
  LinkerConfig linker;
  GraphConfig graph;

  std::filesystem::path TablePath() const;
  std::filesystem::path DecisionsPath() const;
};

// Reads a config file. Relative paths inside it resolve against the file's
// directory. Unknown keys are rejected. Throws ConfigError.
PipelineConfig LoadPipelineConfig(const std::filesystem::path &path);
PipelineConfig ParsePipelineConfig(std::string_view json_text,
                                   const std::filesystem::path &base_dir);

// Throws ConfigError naming |what| and |path| when the file does not exist.
void RequireFile(const std::filesystem::path &path, std::string_view what);

}  // namespace pdd

#endif  // PDD_TOOLS_PIPELINE_CONFIG_H_
