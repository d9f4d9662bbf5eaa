// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "itn/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "itn/unicode.h"

namespace itn {

using nlohmann::json;
using nlohmann::ordered_json;

std::string ToString(DatasetType type) {
  switch (type) {
    case DatasetType::kTypeI:
      return "I";
    case DatasetType::kTypeII:
      return "II";
    case DatasetType::kTypeIII:
      return "III";
  }
  return "I";
}

std::optional<DatasetType> DatasetTypeFromString(std::string_view s) {
  if (s == "I") return DatasetType::kTypeI;
  if (s == "II") return DatasetType::kTypeII;
  if (s == "III") return DatasetType::kTypeIII;
  return std::nullopt;
}

void NormalizeRecord(CorpusRecord* record) {
  if (record->spoken) *record->spoken = NfcNormalizeUtf8(*record->spoken);
  if (record->written) *record->written = NfcNormalizeUtf8(*record->written);
}

std::optional<std::string> CheckTypePresence(const CorpusRecord& record) {
  switch (record.dataset_type) {
    case DatasetType::kTypeI:
      if (!record.spoken || !record.written)
        return "type I record requires both spoken and written";
      break;
    case DatasetType::kTypeII:
      if (!record.written) return "type II record requires written";
      break;
    case DatasetType::kTypeIII:
      if (!record.spoken) return "type III record requires spoken";
      break;
  }
  return std::nullopt;
}

std::string RecordToJsonLine(const CorpusRecord& record) {
  ordered_json j;
  j["id"] = record.id;
  if (record.spoken) j["spoken"] = NfcNormalizeUtf8(*record.spoken);
  if (record.written) j["written"] = NfcNormalizeUtf8(*record.written);
  j["dataset_type"] = ToString(record.dataset_type);
  j["provenance"] = record.provenance;
  return j.dump();
}

CorpusRecord RecordFromJsonLine(const std::string& line, size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(std::string("malformed JSON: ") + e.what(), line_number);
  }
  if (!j.is_object()) throw CorpusError("record is not an object", line_number);
  CorpusRecord record;
  try {
    record.id = j.at("id").get<std::string>();
    if (j.contains("spoken")) record.spoken = j["spoken"].get<std::string>();
    if (j.contains("written")) record.written = j["written"].get<std::string>();
    auto type = DatasetTypeFromString(j.at("dataset_type").get<std::string>());
    if (!type) throw CorpusError("unknown dataset_type", line_number);
    record.dataset_type = *type;
    if (j.contains("provenance"))
      record.provenance = j["provenance"].get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw CorpusError(std::string("bad record field: ") + e.what(),
                      line_number);
  }
  NormalizeRecord(&record);
  return record;
}

CorpusReader::CorpusReader(std::istream& in, CorpusReadOptions options)
    : in_(in), options_(options) {}

std::optional<CorpusRecord> CorpusReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (line.empty()) continue;
    CorpusRecord record;
    try {
      record = RecordFromJsonLine(line, line_);
      if (auto err = CheckTypePresence(record)) {
        throw CorpusError(*err, line_);
      }
      if (options_.expected_type &&
          record.dataset_type != *options_.expected_type) {
        throw CorpusError("dataset_type mismatch: expected " +
                              ToString(*options_.expected_type) + ", got " +
                              ToString(record.dataset_type),
                          line_);
      }
    } catch (const CorpusError& e) {
      if (options_.strict) throw;
      diagnostics_.push_back(e.what());
      continue;
    }
    return record;
  }
  return std::nullopt;
}

std::vector<CorpusRecord> ReadCorpusFile(const std::string& path,
                                         CorpusReadOptions options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  CorpusReader reader(in, options);
  std::vector<CorpusRecord> records;
  while (auto record = reader.Next()) records.push_back(std::move(*record));
  if (!options.strict && !reader.diagnostics().empty()) {
    // Skipped lines are non-fatal by request; leave a note on stderr.
    for (const auto& d : reader.diagnostics())
      std::fputs(("warning: " + path + ": " + d + "\n").c_str(), stderr);
  }
  return records;
}

size_t WriteCorpus(const std::vector<CorpusRecord>& records,
                   std::ostream& out) {
  size_t n = 0;
  for (const auto& record : records) {
    out << RecordToJsonLine(record) << '\n';
    ++n;
  }
  return n;
}

size_t WriteCorpusFile(const std::vector<CorpusRecord>& records,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  size_t n = WriteCorpus(records, out);
  if (!out) throw std::runtime_error("write failed: " + path);
  return n;
}

std::string HypothesisSetToJsonLine(const HypothesisSet& hyps) {
  ordered_json j;
  j["record_id"] = hyps.record_id;
  j["spoken"] = NfcNormalizeUtf8(hyps.spoken);
  ordered_json arr = ordered_json::array();
  for (const auto& h : hyps.hypotheses) {
    arr.push_back({{"text", NfcNormalizeUtf8(h.text)}, {"score", h.score}});
  }
  j["hypotheses"] = arr;
  return j.dump();
}

HypothesisSet HypothesisSetFromJsonLine(const std::string& line,
                                        size_t line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(std::string("malformed JSON: ") + e.what(), line_number);
  }
  HypothesisSet hyps;
  try {
    hyps.record_id = j.at("record_id").get<std::string>();
    hyps.spoken = NfcNormalizeUtf8(j.at("spoken").get<std::string>());
    for (const auto& h : j.at("hypotheses")) {
      hyps.hypotheses.push_back({NfcNormalizeUtf8(h.at("text").get<std::string>()),
                                 h.at("score").get<double>()});
    }
  } catch (const json::exception& e) {
    throw CorpusError(std::string("bad N-best field: ") + e.what(),
                      line_number);
  }
  if (hyps.hypotheses.empty())
    throw CorpusError("empty hypothesis list", line_number);
  // Keep descending score order; stable so backend tie order survives.
  std::stable_sort(hyps.hypotheses.begin(), hyps.hypotheses.end(),
                   [](const Hypothesis& a, const Hypothesis& b) {
                     return a.score > b.score;
                   });
  return hyps;
}

std::vector<HypothesisSet> ReadNbestFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open N-best file: " + path);
  std::vector<HypothesisSet> sets;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    sets.push_back(HypothesisSetFromJsonLine(line, line_number));
  }
  return sets;
}

size_t WriteNbestFile(const std::vector<HypothesisSet>& sets,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const auto& s : sets) out << HypothesisSetToJsonLine(s) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
  return sets.size();
}

}  // namespace itn
