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

#ifndef ITN_CORPUS_H_
#define ITN_CORPUS_H_

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace itn {

// Type I: paired spoken/written. Type II: written only. Type III: spoken only.
enum class DatasetType { kTypeI, kTypeII, kTypeIII };

std::string ToString(DatasetType type);
std::optional<DatasetType> DatasetTypeFromString(std::string_view s);

struct CorpusRecord {
  std::string id;
  std::optional<std::string> spoken;
  std::optional<std::string> written;
  DatasetType dataset_type = DatasetType::kTypeI;
  // Append-only across pipeline stages.
  std::vector<std::string> provenance;
};

// NFC-normalizes both text sides in place.
void NormalizeRecord(CorpusRecord* record);

// Checks the side-presence invariant for the record's own dataset type.
// Returns an error message, or nullopt if the record is well formed.
std::optional<std::string> CheckTypePresence(const CorpusRecord& record);

struct Hypothesis {
  std::string text;
  double score = 0.0;
};

struct HypothesisSet {
  std::string record_id;
  std::string spoken;
  // Sorted by descending score; ties keep backend order. Non-empty; the
  // first element is the 1-best.
  std::vector<Hypothesis> hypotheses;
};

class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& message, size_t line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct CorpusReadOptions {
  std::optional<DatasetType> expected_type;
  // Strict: malformed lines and type violations throw CorpusError.
  // Non-strict: they are skipped and reported through diagnostics().
  bool strict = true;
};

class CorpusReader {
 public:
  CorpusReader(std::istream& in, CorpusReadOptions options = {});

  // Yields records in file order, NFC-normalized. nullopt at end of stream.
  std::optional<CorpusRecord> Next();

  const std::vector<std::string>& diagnostics() const { return diagnostics_; }
  size_t lines_read() const { return line_; }

 private:
  std::istream& in_;
  CorpusReadOptions options_;
  std::vector<std::string> diagnostics_;
  size_t line_ = 0;
};

std::vector<CorpusRecord> ReadCorpusFile(const std::string& path,
                                         CorpusReadOptions options = {});

// Returns the number of records written. Records are NFC-normalized on the
// way out, so write->read->write is byte-identical.
size_t WriteCorpus(const std::vector<CorpusRecord>& records, std::ostream& out);
size_t WriteCorpusFile(const std::vector<CorpusRecord>& records,
                       const std::string& path);

std::string RecordToJsonLine(const CorpusRecord& record);
CorpusRecord RecordFromJsonLine(const std::string& line, size_t line_number);

// N-best JSON-lines: {"record_id":..., "spoken":..., "hypotheses":[{"text":...,
// "score":...}, ...]}.
std::string HypothesisSetToJsonLine(const HypothesisSet& hyps);
HypothesisSet HypothesisSetFromJsonLine(const std::string& line,
                                        size_t line_number);
std::vector<HypothesisSet> ReadNbestFile(const std::string& path);
size_t WriteNbestFile(const std::vector<HypothesisSet>& sets,
                      const std::string& path);

}  // namespace itn

#endif  // ITN_CORPUS_H_
