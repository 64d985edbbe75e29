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

#include "pdd/ingest.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "pdd/csv.h"
#include "pdd/errors.h"
#include "pdd/normalize.h"

namespace pdd {

using json = nlohmann::json;

namespace {

// Column layout resolved from a header row.
class Header {
 public:
  Header(std::vector<std::string> names) : names_(std::move(names)) {
    for (size_t i = 0; i < names_.size(); ++i) {
      names_[i] = std::string(TrimWhitespace(names_[i]));
      if (!index_.emplace(names_[i], i).second) {
        throw DataError("duplicate column '" + names_[i] + "'");
      }
    }
  }

  int Find(const std::string &name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : static_cast<int>(it->second);
  }

  size_t Require(const std::string &name) const {
    int index = Find(name);
    if (index < 0) throw DataError("missing column '" + name + "'");
    return index;
  }

  const std::vector<std::string> &names() const { return names_; }
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, size_t> index_;
};

bool IsBlankRow(const std::vector<std::string> &fields) {
  return fields.size() == 1 && TrimWhitespace(fields[0]).empty();
}

// Iterates the data rows of a CSV stream, calling |fn(header, line, fields)|
// for each non-blank row with the header's width. Rows with the wrong width
// are rejected here. A zero-byte stream reports an empty header.
template <typename Record, typename Fn>
void ForEachRow(std::istream &in, LoadResult<Record> *result,
                const std::function<void(const Header &)> &on_header, Fn fn) {
  CsvReader reader(in);
  std::vector<std::string> fields;
  if (!reader.Next(&fields)) {
    // Zero-byte file: an empty table.
    on_header(Header({}));
    return;
  }
  Header header(fields);
  on_header(header);
  while (reader.Next(&fields)) {
    if (IsBlankRow(fields)) continue;
    ++result->rows_in;
    if (fields.size() != header.size()) {
      result->rejects.push_back(
          {reader.line(), "expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(fields.size())});
      continue;
    }
    fn(header, reader.line(), fields);
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

bool ParseDecimal(std::string_view text, double *value) {
  text = TrimWhitespace(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(*value);
}

const json &RequireKey(const json &object, const char *key, const std::string &where) {
  auto it = object.find(key);
  if (it == object.end()) throw DataError(where + ": missing key '" + key + "'");
  return *it;
}

std::string RequireString(const json &value, const std::string &where) {
  if (!value.is_string()) throw DataError(where + ": expected a string");
  return value.get<std::string>();
}

const json *OptionalArray(const json &object, const char *key, const std::string &where) {
  auto it = object.find(key);
  if (it == object.end() || it->is_null()) return nullptr;
  if (!it->is_array()) throw DataError(where + ": '" + key + "' must be an array");
  return &*it;
}

json ParseJson(std::string_view text, const std::string &what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw DataError(what + ": " + e.what());
  }
}

void WriteTextFile(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace

std::string ReadFileToString(const std::filesystem::path &path) {
  std::ifstream in = OpenOrThrow(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string FormatDecimal(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

LoadResult<PatientRecord> ReadPatients(std::istream &in) {
  LoadResult<PatientRecord> result;
  size_t id_column = 0;
  std::unordered_map<std::string, size_t> position;
  ForEachRow(in, &result,
             [&](const Header &header) {
               if (header.size() == 0) return;
               id_column = header.Require("patient_id");
             },
             [&](const Header &header, int line, const std::vector<std::string> &fields) {
               std::string id(TrimWhitespace(fields[id_column]));
               if (id.empty()) {
                 result.rejects.push_back({line, "empty patient_id"});
                 return;
               }
               auto [it, inserted] = position.emplace(id, result.records.size());
               if (inserted) {
                 result.records.push_back({id, {}});
               } else {
                 ++result.merged;
               }
               auto &attrs = result.records[it->second].demographics;
               for (size_t i = 0; i < fields.size(); ++i) {
                 if (i == id_column || fields[i].empty()) continue;
                 const std::string &name = header.names()[i];
                 auto existing = std::find_if(attrs.begin(), attrs.end(),
                                              [&](const auto &a) { return a.first == name; });
                 if (existing != attrs.end()) {
                   existing->second = fields[i];
                 } else {
                   attrs.emplace_back(name, fields[i]);
                 }
               }
             });
  return result;
}

LoadResult<PatientRecord> LoadPatients(const std::filesystem::path &path) {
  std::ifstream in = OpenOrThrow(path);
  try {
    return ReadPatients(in);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LoadResult<PrescriptionRecord> ReadPrescriptions(
    std::istream &in, const std::set<std::string> &patients) {
  LoadResult<PrescriptionRecord> result;
  size_t id_col = 0, drug_col = 0, value_col = 0, unit_col = 0;
  ForEachRow(in, &result,
             [&](const Header &header) {
               if (header.size() == 0) return;
               id_col = header.Require("patient_id");
               drug_col = header.Require("drug_name");
               value_col = header.Require("dosage_value");
               unit_col = header.Require("dosage_unit");
             },
             [&](const Header &, int line, const std::vector<std::string> &fields) {
               PrescriptionRecord record;
               record.patient_id = std::string(TrimWhitespace(fields[id_col]));
               record.drug_name_raw = std::string(TrimWhitespace(fields[drug_col]));
               if (patients.count(record.patient_id) == 0) {
                 result.rejects.push_back({line, "unknown patient '" + record.patient_id + "'"});
                 return;
               }
               if (record.drug_name_raw.empty()) {
                 result.rejects.push_back({line, "empty drug_name"});
                 return;
               }
               std::string_view value_text = TrimWhitespace(fields[value_col]);
               std::string unit(TrimWhitespace(fields[unit_col]));
               if (!value_text.empty()) {
                 double value = 0.0;
                 if (!ParseDecimal(value_text, &value)) {
                   result.rejects.push_back(
                       {line, "malformed dosage_value '" + std::string(value_text) + "'"});
                   return;
                 }
                 if (value <= 0.0) {
                   result.rejects.push_back({line, "dosage_value must be positive"});
                   return;
                 }
                 if (unit.empty()) {
                   result.rejects.push_back({line, "dosage_value without dosage_unit"});
                   return;
                 }
                 record.dosage = Dosage{value, unit};
               }
               result.records.push_back(std::move(record));
             });
  return result;
}

LoadResult<PrescriptionRecord> LoadPrescriptions(const std::filesystem::path &path,
                                                 const std::set<std::string> &patients) {
  std::ifstream in = OpenOrThrow(path);
  try {
    return ReadPrescriptions(in, patients);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LoadResult<DiagnosisRecord> ReadDiagnoses(std::istream &in,
                                          const std::set<std::string> &patients) {
  LoadResult<DiagnosisRecord> result;
  size_t id_col = 0, code_col = 0;
  ForEachRow(in, &result,
             [&](const Header &header) {
               if (header.size() == 0) return;
               id_col = header.Require("patient_id");
               code_col = header.Require("icd9_code");
             },
             [&](const Header &, int line, const std::vector<std::string> &fields) {
               DiagnosisRecord record;
               record.patient_id = std::string(TrimWhitespace(fields[id_col]));
               record.icd9_code_raw = std::string(TrimWhitespace(fields[code_col]));
               if (patients.count(record.patient_id) == 0) {
                 result.rejects.push_back({line, "unknown patient '" + record.patient_id + "'"});
                 return;
               }
               try {
                 NormalizeIcd9(record.icd9_code_raw);
               } catch (const DataError &) {
                 result.rejects.push_back({line, "invalid icd9_code '" + record.icd9_code_raw + "'"});
                 return;
               }
               result.records.push_back(std::move(record));
             });
  return result;
}

LoadResult<DiagnosisRecord> LoadDiagnoses(const std::filesystem::path &path,
                                          const std::set<std::string> &patients) {
  std::ifstream in = OpenOrThrow(path);
  try {
    return ReadDiagnoses(in, patients);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<DrugKbEntry> ParseDrugKb(std::string_view json_text) {
  json root = ParseJson(json_text, "drug KB");
  if (!root.is_array()) throw DataError("drug KB: top level must be an array");

  std::vector<DrugKbEntry> kb;
  std::set<std::string> seen_ids;
  for (size_t i = 0; i < root.size(); ++i) {
    const json &item = root[i];
    std::string where = "drug KB entry " + std::to_string(i);
    if (!item.is_object()) throw DataError(where + ": expected an object");

    DrugKbEntry entry;
    entry.kb_id = RequireString(RequireKey(item, "id", where), where);
    if (entry.kb_id.empty()) throw DataError(where + ": empty id");
    where += " (" + entry.kb_id + ")";
    if (!seen_ids.insert(entry.kb_id).second) {
      throw DataError("drug KB: duplicate id '" + entry.kb_id + "'");
    }
    entry.canonical_name = std::string(
        TrimWhitespace(RequireString(RequireKey(item, "name", where), where)));
    if (TokenizeName(entry.canonical_name).empty()) {
      throw DataError(where + ": empty name");
    }

    std::set<std::string> alias_keys = {TokenizeName(entry.canonical_name).Joined()};
    if (const json *aliases = OptionalArray(item, "aliases", where)) {
      for (const json &alias : *aliases) {
        std::string text(TrimWhitespace(RequireString(alias, where + " alias")));
        std::string key = TokenizeName(text).Joined();
        if (key.empty() || !alias_keys.insert(key).second) continue;
        entry.aliases.push_back(std::move(text));
      }
    }
    if (const json *indications = OptionalArray(item, "indications", where)) {
      for (const json &code : *indications) {
        entry.indications.insert(NormalizeIcd9(RequireString(code, where + " indication")));
      }
    }
    if (const json *dosages = OptionalArray(item, "dosages", where)) {
      for (const json &dosage : *dosages) {
        if (!dosage.is_object()) throw DataError(where + ": dosage must be an object");
        const json &value = RequireKey(dosage, "value", where);
        if (!value.is_number()) throw DataError(where + ": dosage value must be a number");
        double v = value.get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw DataError(where + ": dosage value must be positive");
        }
        entry.standard_dosages.insert(
            Dosage{v, RequireString(RequireKey(dosage, "unit", where), where)});
      }
    }
    kb.push_back(std::move(entry));
  }
  return kb;
}

std::vector<DrugKbEntry> LoadDrugKb(const std::filesystem::path &path) {
  std::string text = ReadFileToString(path);
  try {
    return ParseDrugKb(text);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Icd9Ontology ParseIcd9Ontology(std::string_view json_text) {
  json root = ParseJson(json_text, "ICD-9 ontology");
  if (!root.is_array()) throw DataError("ICD-9 ontology: top level must be an array");
  Icd9Ontology ontology;
  for (size_t i = 0; i < root.size(); ++i) {
    const json &item = root[i];
    std::string where = "ICD-9 ontology entry " + std::to_string(i);
    if (!item.is_object()) throw DataError(where + ": expected an object");
    std::string code = NormalizeIcd9(RequireString(RequireKey(item, "code", where), where));
    std::string label;
    if (auto it = item.find("label"); it != item.end() && !it->is_null()) {
      label = RequireString(*it, where);
    }
    if (!ontology.codes.insert(code).second) {
      throw DataError("ICD-9 ontology: duplicate code '" + code + "'");
    }
    ontology.labels[code] = std::move(label);
  }
  return ontology;
}

Icd9Ontology LoadIcd9Ontology(const std::filesystem::path &path) {
  std::string text = ReadFileToString(path);
  try {
    return ParseIcd9Ontology(text);
  } catch (const DataError &e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::set<std::string> PatientIds(const std::vector<PatientRecord> &patients) {
  std::set<std::string> ids;
  for (const PatientRecord &p : patients) ids.insert(p.patient_id);
  return ids;
}

void WritePatients(const std::filesystem::path &path,
                   const std::vector<PatientRecord> &patients) {
  // Attribute columns in first-seen order.
  std::vector<std::string> columns;
  for (const PatientRecord &p : patients) {
    for (const auto &[name, value] : p.demographics) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) {
        columns.push_back(name);
      }
    }
  }
  std::ostringstream out;
  std::vector<std::string> row = {"patient_id"};
  row.insert(row.end(), columns.begin(), columns.end());
  WriteCsvRow(out, row);
  for (const PatientRecord &p : patients) {
    row.assign(1, p.patient_id);
    for (const std::string &column : columns) {
      auto it = std::find_if(p.demographics.begin(), p.demographics.end(),
                             [&](const auto &a) { return a.first == column; });
      row.push_back(it == p.demographics.end() ? "" : it->second);
    }
    WriteCsvRow(out, row);
  }
  WriteTextFile(path, out.str());
}

void WritePrescriptions(const std::filesystem::path &path,
                        const std::vector<PrescriptionRecord> &prescriptions) {
  std::ostringstream out;
  WriteCsvRow(out, {"patient_id", "drug_name", "dosage_value", "dosage_unit"});
  for (const PrescriptionRecord &p : prescriptions) {
    if (p.dosage) {
      WriteCsvRow(out, {p.patient_id, p.drug_name_raw, FormatDecimal(p.dosage->value),
                        p.dosage->unit});
    } else {
      WriteCsvRow(out, {p.patient_id, p.drug_name_raw, "", ""});
    }
  }
  WriteTextFile(path, out.str());
}

void WriteDiagnoses(const std::filesystem::path &path,
                    const std::vector<DiagnosisRecord> &diagnoses) {
  std::ostringstream out;
  WriteCsvRow(out, {"patient_id", "icd9_code"});
  for (const DiagnosisRecord &d : diagnoses) WriteCsvRow(out, {d.patient_id, d.icd9_code_raw});
  WriteTextFile(path, out.str());
}

void WriteDrugKb(const std::filesystem::path &path, const std::vector<DrugKbEntry> &kb) {
  json root = json::array();
  for (const DrugKbEntry &entry : kb) {
    json dosages = json::array();
    for (const Dosage &d : entry.standard_dosages) {
      dosages.push_back({{"value", d.value}, {"unit", d.unit}});
    }
    std::vector<std::string> indications;
    for (const std::string &code : entry.indications) indications.push_back(DottedIcd9(code));
    root.push_back({{"id", entry.kb_id},
                    {"name", entry.canonical_name},
                    {"aliases", entry.aliases},
                    {"indications", indications},
                    {"dosages", dosages}});
  }
  WriteTextFile(path, root.dump(1) + "\n");
}

void WriteIcd9Ontology(const std::filesystem::path &path, const Icd9Ontology &ontology) {
  json root = json::array();
  for (const std::string &code : ontology.codes) {
    auto label = ontology.labels.find(code);
    root.push_back({{"code", DottedIcd9(code)},
                    {"label", label == ontology.labels.end() ? "" : label->second}});
  }
  WriteTextFile(path, root.dump(1) + "\n");
}

}  // namespace pdd
