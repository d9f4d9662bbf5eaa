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

#ifndef ITN_ITN_BACKEND_H_
#define ITN_ITN_BACKEND_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "itn/corpus.h"
#include "itn/mtn.h"

namespace itn {

enum class BackendKind { kRuleBased, kMock, kExternal };

// Faults the mock backend injects into the 1-best. Weights select among the
// kinds; p_corrupt_best gates whether a given input is corrupted at all.
struct MockParams {
  double p_corrupt_best = 0.0;
  double w_drop_conversion = 1.0;
  double w_delete_word = 1.0;
  double w_repeat_word = 0.0;
  double w_space_noise = 0.0;
  // Pad the list so at least this many uncorrupted hypotheses follow the
  // 1-best (scores descend in unit steps, inside the default alpha gap).
  int ensure_correct_lower = 2;
  // Skip deletion of words adjacent to digit spans; such deletions merge
  // into the neighbouring conversion region and are unrecoverable by design.
  bool avoid_digit_adjacent_deletion = true;
  uint64_t seed = 0;
};

struct BackendSpec {
  BackendKind kind = BackendKind::kRuleBased;
  int n_best = 5;
  // Builtin locale name or grammar file path (RuleBased, and Mock's inner).
  std::string grammar = "ko";
  MockParams mock;
  // Command receiving spoken lines on stdin, emitting N-best JSON lines on
  // stdout in the same order (External).
  std::string external_command;
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual HypothesisSet Infer(std::string_view record_id,
                              std::string_view spoken) = 0;

  // Default: sequential per-record Infer. External overrides with one
  // subprocess per batch.
  virtual std::vector<HypothesisSet> InferBatch(
      const std::vector<std::string>& record_ids,
      const std::vector<std::string>& spoken_texts);
};

// RuleBased inverts the verbalization grammar: maximal verbalized numeric
// spans become digits, everything else passes through. Scores are negated
// parse-ambiguity penalties (the 1-best is the maximal-span parse); they are
// synthetic, not probabilities.
std::unique_ptr<Backend> MakeBackend(const BackendSpec& spec);

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace itn

#endif  // ITN_ITN_BACKEND_H_
