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

#ifndef ITN_METRICS_H_
#define ITN_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "itn/alignment.h"
#include "itn/corpus.h"

namespace itn {

struct EditCounts {
  size_t substitutions = 0;
  size_t insertions = 0;
  size_t deletions = 0;
  size_t total() const { return substitutions + insertions + deletions; }
};

// Levenshtein distance / reference length in codepoints. Empty reference:
// 0.0 against an empty hypothesis, otherwise distance / 1 (flagged in
// corpus-level reports).
double Cer(std::string_view hypothesis, std::string_view reference);

// ITN vs. non-ITN regions of the reference written text, from aligning the
// gold spoken/written pair with an empty blacklist. The ranges partition the
// written text.
struct RegionDecomposition {
  std::vector<CpRange> itn_ranges;
  std::vector<CpRange> non_itn_ranges;
};
RegionDecomposition RegionDecompose(std::string_view reference_spoken,
                                    std::string_view reference_written);

struct RecordEval {
  std::string id;
  size_t itn_ref_len = 0;
  size_t non_itn_ref_len = 0;
  size_t itn_errors = 0;
  size_t non_itn_errors = 0;
  // Insertions sitting exactly between two different regions; reported
  // separately, never silently assigned.
  size_t boundary_errors = 0;
  EditCounts counts;
  bool empty_reference_flagged = false;
};

struct EvalReport {
  double cer = 0.0;
  double i_cer = 0.0;
  double ni_cer = 0.0;
  EditCounts counts;
  size_t boundary_errors = 0;
  size_t flagged_empty_references = 0;
  std::vector<RecordEval> per_record;

  nlohmann::ordered_json ToJson() const;
};

struct EvalOptions {
  // Strip all whitespace from both sides before evaluation.
  bool ignore_space = false;
  int jobs = 1;
};

// Joins hypothesis and reference corpora by id (hypothesis text = written
// side), attributes each edit operation to the reference region containing
// its reference position, and micro-averages: I-CER = ITN-attributed errors
// over ITN reference length, NI-CER likewise, CER global. Insertions go to
// the region of the preceding reference character (leading insertions to the
// first region); insertions exactly between two different regions land in
// the boundary bucket. Throws std::invalid_argument on id mismatches or
// missing sides.
EvalReport Evaluate(const std::vector<CorpusRecord>& hypotheses,
                    const std::vector<CorpusRecord>& references,
                    EvalOptions options = {});

}  // namespace itn

#endif  // ITN_METRICS_H_
