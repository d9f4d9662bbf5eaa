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

#ifndef ITN_SSL_H_
#define ITN_SSL_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "itn/augment.h"
#include "itn/corpus.h"
#include "itn/itn_backend.h"
#include "itn/llm_client.h"
#include "itn/post_align.h"

namespace itn {

// One self-training iteration: teacher inference over the spoken-only corpus,
// confidence filtering, training-set assembly, optional external trainer.
struct SslRoundPlan {
  int round_index = 1;
  BackendSpec teacher;
  std::string type1_corpus;  // optional, may be empty
  std::string type2_corpus;  // optional
  std::string type3_corpus;  // required
  std::string accepted_out;
  std::string manifest_out;
  std::string report_out;       // defaults to manifest_out + ".report.json"
  std::string trainer_command;  // optional; receives the manifest path
  int trainer_epochs = 10;
  uint64_t seed = 0;
  bool use_pa = true;  // constrain teacher output through post-aligning
  PaConfig pa;
  AugmentConfig da;
  std::string grammar = "ko";
  // Scorer: fixture path for the stub provider, or empty for constant-yes.
  std::string stub_fixture;
  std::optional<ProviderConfig> http_provider;

  static SslRoundPlan FromJsonFile(const std::string& path);
  nlohmann::ordered_json ToJson() const;
};

struct GenerateOutcome {
  std::vector<std::pair<CorpusRecord, HypothesisSet>> pairs;
  std::vector<std::string> skipped;  // per-record backend failures
};

// Teacher inference over Type III records. Pseudo-written text is the
// post-aligned backend output (or the raw 1-best with use_pa off);
// provenance gains "pseudo-written" and the round tag.
GenerateOutcome GeneratePseudoWritten(const std::vector<CorpusRecord>& type3,
                                      Backend* backend, const PaConfig& pa,
                                      bool use_pa, int round_index);

struct FilterOutcome {
  std::vector<CorpusRecord> accepted;
  std::vector<CorpusRecord> copied_through;
};

// Accepted records keep their pseudo-written side. Rejected (or
// transport-failed) records get written := spoken with provenance
// "copy-through". No record is discarded.
FilterOutcome FilterWithConfidence(
    const std::vector<std::pair<CorpusRecord, HypothesisSet>>& pairs,
    ConfidenceScorer* scorer);

// Manifest rows: Type I originals; DA of Type I, Type II and accepted
// pseudo-written records; Type III (spoken, pseudo-written/copy-through)
// pairs. Spacing noise is applied to spoken sides that did not already pass
// through DA. Every row has both sides present.
std::vector<CorpusRecord> AssembleTrainingSet(
    const std::vector<CorpusRecord>& type1,
    const std::vector<CorpusRecord>& type2,
    const std::vector<CorpusRecord>& type3_labeled,
    const VerbalizationGrammar& grammar, const AugmentConfig& da_cfg);

struct RoundReport {
  int round_index = 0;
  size_t type3_input = 0;
  size_t generated = 0;
  size_t skipped = 0;
  size_t accepted = 0;
  size_t copied_through = 0;
  double acceptance_rate = 0.0;
  double copy_through_rate = 0.0;
  size_t manifest_records = 0;
  int trainer_exit_code = 0;
  double seconds = 0.0;

  nlohmann::ordered_json ToJson() const;
};

class SslError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs generate -> filter -> assemble, persists artifacts (accepted corpus,
// manifest, manifest header with seeds/configs/input digests, report), then
// invokes the trainer hook if configured. A nonzero trainer exit fails the
// round after artifacts are persisted.
RoundReport RunRound(const SslRoundPlan& plan);

}  // namespace itn

#endif  // ITN_SSL_H_
