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

#include "cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdd/enm.h"
#include "pdd/errors.h"
#include "pdd/eval.h"
#include "pdd/graph.h"
#include "pdd/ingest.h"
#include "pdd/linker.h"
#include "pdd/synthetic.h"
#include "pdd/translation_table.h"
#include "pipeline_config.h"

namespace pdd {

namespace {

namespace fs = std::filesystem;

// Command-line values that override the config file when given.
struct Overrides {
  std::string config;
  std::optional<std::string> patients, prescriptions, diagnoses, drug_kb, icd9_ontology, gold,
      table, decisions, out;
  std::optional<int> max_iterations;
  std::optional<double> tolerance, epsilon;
  std::optional<int> k;
  std::optional<double> score_floor, dosage_tolerance;
  std::optional<std::string> ns, drug_kb_iri_prefix, icd9_iri_prefix;
};

void AddPipelineOptions(CLI::App *cmd, Overrides *o) {
  cmd->add_option("--config", o->config, "JSON config file");
  cmd->add_option("--patients", o->patients, "patients.csv");
  cmd->add_option("--prescriptions", o->prescriptions, "prescriptions.csv");
  cmd->add_option("--diagnoses", o->diagnoses, "diagnoses.csv");
  cmd->add_option("--drug-kb", o->drug_kb, "drug_kb.json");
  cmd->add_option("--ontology", o->icd9_ontology, "icd9_ontology.json");
  cmd->add_option("--gold", o->gold, "gold_links.json");
  cmd->add_option("--table", o->table, "translation table file");
  cmd->add_option("--decisions", o->decisions, "link decision audit file");
  cmd->add_option("--out", o->out, "output directory");
  cmd->add_option("--max-iterations", o->max_iterations, "EM iteration cap");
  cmd->add_option("--tolerance", o->tolerance, "EM log-likelihood tolerance");
  cmd->add_option("--epsilon", o->epsilon, "normalization factor of the name model");
  cmd->add_option("--k", o->k, "candidates scored per mention");
  cmd->add_option("--score-floor", o->score_floor, "minimum P(m|d)/eps to link");
  cmd->add_option("--dosage-tolerance", o->dosage_tolerance, "relative dosage tolerance");
  cmd->add_option("--namespace", o->ns, "IRI namespace for minted entities");
  cmd->add_option("--drug-kb-iri-prefix", o->drug_kb_iri_prefix, "sameAs prefix for drugs");
  cmd->add_option("--icd9-iri-prefix", o->icd9_iri_prefix, "sameAs prefix for diseases");
}

PipelineConfig ResolveConfig(const Overrides &o) {
  PipelineConfig config;
  if (!o.config.empty()) config = LoadPipelineConfig(o.config);
  auto set_path = [](const std::optional<std::string> &flag, fs::path *out) {
    if (flag) *out = *flag;
  };
  set_path(o.patients, &config.patients);
  set_path(o.prescriptions, &config.prescriptions);
  set_path(o.diagnoses, &config.diagnoses);
  set_path(o.drug_kb, &config.drug_kb);
  set_path(o.icd9_ontology, &config.icd9_ontology);
  set_path(o.gold, &config.gold);
  set_path(o.table, &config.table);
  set_path(o.decisions, &config.decisions);
  set_path(o.out, &config.output_dir);
  if (o.max_iterations) config.em.max_iterations = *o.max_iterations;
  if (o.tolerance) config.em.log_likelihood_tolerance = *o.tolerance;
  if (o.epsilon) config.em.epsilon = *o.epsilon;
  if (o.k) config.linker.k = *o.k;
  if (o.score_floor) config.linker.score_floor = *o.score_floor;
  if (o.dosage_tolerance) config.linker.dosage_tolerance = *o.dosage_tolerance;
  if (o.ns) config.graph.ns = *o.ns;
  if (o.drug_kb_iri_prefix) config.graph.drug_kb_iri_prefix = *o.drug_kb_iri_prefix;
  if (o.icd9_iri_prefix) config.graph.icd9_iri_prefix = *o.icd9_iri_prefix;

  config.em.Validate();
  config.linker.Validate();
  config.graph.Validate();
  return config;
}

void EnsureOutputDir(const PipelineConfig &config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + config.output_dir.string() + ": " +
                      ec.message());
  }
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

template <typename Record>
void ReportRejects(const std::string &what, const LoadResult<Record> &result) {
  for (const RowReject &reject : result.rejects) {
    spdlog::warn("{}: line {} rejected: {}", what, reject.line, reject.reason);
  }
  spdlog::info("{}: {} rows, {} records, {} rejected, {} merged", what, result.rows_in,
               result.records.size(), result.rejects.size(), result.merged);
}

// The EMR tables, loaded and referentially checked.
struct EmrTables {
  std::vector<PatientRecord> patients;
  std::vector<PrescriptionRecord> prescriptions;
  std::vector<DiagnosisRecord> diagnoses;
};

EmrTables LoadEmr(const PipelineConfig &config) {
  RequireFile(config.patients, "patients");
  RequireFile(config.prescriptions, "prescriptions");
  RequireFile(config.diagnoses, "diagnoses");
  EmrTables tables;
  auto patients = LoadPatients(config.patients);
  ReportRejects("patients", patients);
  tables.patients = std::move(patients.records);
  std::set<std::string> ids = PatientIds(tables.patients);
  auto prescriptions = LoadPrescriptions(config.prescriptions, ids);
  ReportRejects("prescriptions", prescriptions);
  tables.prescriptions = std::move(prescriptions.records);
  auto diagnoses = LoadDiagnoses(config.diagnoses, ids);
  ReportRejects("diagnoses", diagnoses);
  tables.diagnoses = std::move(diagnoses.records);
  return tables;
}

int CmdTrain(const PipelineConfig &config) {
  RequireFile(config.drug_kb, "drug KB");
  EnsureOutputDir(config);
  std::vector<DrugKbEntry> kb = LoadDrugKb(config.drug_kb);
  std::vector<TrainingPair> pairs = BuildTrainingPairs(kb);
  spdlog::info("training on {} pairs from {} KB entries", pairs.size(), kb.size());

  EmResult result = TrainEm(pairs, config.em);
  spdlog::info("EM stopped after {} iterations ({}), log-likelihood {}", result.iterations,
               result.converged ? "converged" : "iteration cap", result.likelihood_trace.back());

  fs::path table_path = config.TablePath();
  SaveTable(result.table, table_path);
  std::string trace = "iteration,log_likelihood\n";
  for (size_t i = 0; i < result.likelihood_trace.size(); ++i) {
    trace += std::to_string(i) + "," + FormatDecimal(result.likelihood_trace[i]) + "\n";
  }
  WriteText(config.output_dir / "likelihood_trace.csv", trace);
  spdlog::info("wrote {} ({} entries)", table_path.string(), result.table.size());
  return kExitOk;
}

int CmdLink(const PipelineConfig &config) {
  RequireFile(config.drug_kb, "drug KB");
  RequireFile(config.TablePath(), "translation table");
  EmrTables emr = LoadEmr(config);
  EnsureOutputDir(config);

  TranslationTable table = LoadTable(config.TablePath());
  LinkerConfig linker_config = config.linker;
  linker_config.epsilon = table.epsilon();
  DrugLinker linker(LoadDrugKb(config.drug_kb), std::move(table), linker_config);
  PatientContext ctx = BuildPatientContext(emr.prescriptions, emr.diagnoses);
  std::map<std::string, LinkDecision> decisions = linker.LinkAll(emr.prescriptions, ctx);

  size_t linked = 0;
  for (const auto &[mention, decision] : decisions) linked += decision.linked;
  WriteDecisions(config.DecisionsPath().string(), decisions);
  spdlog::info("linked {} of {} drug mentions; wrote {}", linked, decisions.size(),
               config.DecisionsPath().string());
  return kExitOk;
}

int CmdBuildGraph(const PipelineConfig &config) {
  RequireFile(config.icd9_ontology, "ICD-9 ontology");
  RequireFile(config.DecisionsPath(), "link decisions");
  EmrTables emr = LoadEmr(config);
  EnsureOutputDir(config);

  Icd9Ontology ontology = LoadIcd9Ontology(config.icd9_ontology);
  std::map<std::string, LinkDecision> drug_decisions =
      ReadDecisions(config.DecisionsPath().string());
  std::map<std::string, DiseaseLink> disease_decisions;
  for (const DiagnosisRecord &d : emr.diagnoses) {
    if (!disease_decisions.count(d.icd9_code_raw)) {
      disease_decisions.emplace(d.icd9_code_raw, LinkDisease(d.icd9_code_raw, ontology));
    }
  }

  GraphBuild build = BuildGraph(emr.patients, emr.prescriptions, emr.diagnoses, drug_decisions,
                                disease_decisions, config.graph);
  size_t lines = SerializeNTriples(build.graph, config.output_dir / "pdd.nt");
  DatasetStatistics stats = ComputeStatistics(build.graph, config.graph);
  WriteText(config.output_dir / "statistics.json", StatisticsToJson(stats));
  std::string table = StatisticsToText(stats);
  WriteText(config.output_dir / "statistics.txt", table);
  std::cout << table;
  spdlog::info("wrote {} triples to {}", lines, (config.output_dir / "pdd.nt").string());
  return kExitOk;
}

int CmdEval(const PipelineConfig &config) {
  RequireFile(config.gold, "gold links");
  RequireFile(config.DecisionsPath(), "link decisions");
  EnsureOutputDir(config);
  EvalReport report =
      EvaluateLinks(ReadDecisions(config.DecisionsPath().string()), LoadGoldLinks(config.gold));
  WriteText(config.output_dir / "eval_report.json", EvalReportToJson(report));
  std::string text = EvalReportToText(report);
  WriteText(config.output_dir / "eval_report.txt", text);
  std::cout << text;
  return kExitOk;
}

struct SynthOptions {
  uint64_t seed = 1;
  int n_patients = 500;
  int n_drugs = 100;
  std::string profile = "mimic_like";
  std::string out = "synthetic";
};

int CmdSynth(const SynthOptions &options) {
  NoiseProfile profile = ParseNoiseProfile(options.profile);
  SyntheticCorpus corpus =
      GenerateSyntheticCorpus(options.seed, options.n_patients, options.n_drugs, profile);
  fs::path dir = options.out;
  WriteSyntheticCorpus(corpus, dir);
  nlohmann::json config = {{"patients", "patients.csv"},
                           {"prescriptions", "prescriptions.csv"},
                           {"diagnoses", "diagnoses.csv"},
                           {"drug_kb", "drug_kb.json"},
                           {"icd9_ontology", "icd9_ontology.json"},
                           {"gold", "gold_links.json"},
                           {"output_dir", "out"}};
  WriteText(dir / "config.json", config.dump(1) + "\n");
  spdlog::info("wrote {} patients, {} prescriptions, {} diagnoses, {} KB drugs to {}",
               corpus.patients.size(), corpus.prescriptions.size(), corpus.diagnoses.size(),
               corpus.drug_kb.size(), dir.string());
  return kExitOk;
}

void ConfigureLogging() {
  auto logger = spdlog::get("pdd");
  if (!logger) logger = spdlog::stderr_color_mt("pdd");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char *env = std::getenv("PDD_LOG")) level = spdlog::level::from_str(env);
  spdlog::set_level(level);
}

}  // namespace

int RunPdd(int argc, const char *const *argv) {
  ConfigureLogging();

  CLI::App app{"Links EMR drug and disease mentions to a drug KB and ICD-9, and emits an RDF "
               "patient-drug-disease graph."};
  app.name("pdd");
  app.require_subcommand(1);

  Overrides train_flags, link_flags, graph_flags, eval_flags;
  CLI::App *train = app.add_subcommand("train", "Train the name model on KB aliases");
  AddPipelineOptions(train, &train_flags);
  CLI::App *link = app.add_subcommand("link", "Link drug mentions and write the audit file");
  AddPipelineOptions(link, &link_flags);
  CLI::App *build = app.add_subcommand("build-graph", "Write N-Triples and statistics");
  AddPipelineOptions(build, &graph_flags);
  CLI::App *eval = app.add_subcommand("eval", "Score link decisions against gold links");
  AddPipelineOptions(eval, &eval_flags);

  SynthOptions synth_options;
  CLI::App *synth = app.add_subcommand("synth", "Generate a synthetic corpus with gold links");
  synth->add_option("--seed", synth_options.seed, "random seed");
  synth->add_option("--n-patients", synth_options.n_patients, "number of patients");
  synth->add_option("--n-drugs", synth_options.n_drugs, "number of KB drugs");
  synth->add_option("--profile", synth_options.profile, "clean or mimic_like");
  synth->add_option("--out", synth_options.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int status = app.exit(e);
    return status == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return CmdTrain(ResolveConfig(train_flags));
    if (link->parsed()) return CmdLink(ResolveConfig(link_flags));
    if (build->parsed()) return CmdBuildGraph(ResolveConfig(graph_flags));
    if (eval->parsed()) return CmdEval(ResolveConfig(eval_flags));
    if (synth->parsed()) return CmdSynth(synth_options);
  } catch (const ConfigError &e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const DataError &e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const std::exception &e) {
    spdlog::error("internal error: {}", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace pdd
