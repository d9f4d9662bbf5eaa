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

#ifndef ITN_AUGMENT_H_
#define ITN_AUGMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "itn/alignment.h"
#include "itn/corpus.h"
#include "itn/mtn.h"

namespace itn {

// Probabilities are not taken from any reference; they are engineering
// defaults and fully configurable.
struct AugmentConfig {
  double p_repeat = 0.1;
  int max_repeats = 2;
  double p_number_sub = 0.5;
  int sub_digit_len_min = 1;
  int sub_digit_len_max = 6;
  double p_space_noise = 0.2;
  uint64_t seed = 0;
};

// Stage constants mixed into per-record seeds so each noise pass draws from
// an independent deterministic stream. Tests replay draws with these.
inline constexpr uint64_t kStageRepetition = 0x7265706541;
inline constexpr uint64_t kStageNumberSub = 0x6e756d7342;
inline constexpr uint64_t kStageSampling = 0x73616d7043;
inline constexpr uint64_t kStageSpacing = 0x7370616344;

uint64_t RecordSeed(uint64_t base_seed, std::string_view record_id,
                    uint64_t stage);

// Each whitespace-delimited word is independently repeated k extra times
// (k uniform in 1..max_repeats) with probability p_repeat. Non-repeated
// regions, including original separators, are byte-identical to the input.
std::string AddRepetitionNoise(std::string_view written,
                               const AugmentConfig& cfg);

// Each maximal digit span is replaced, with probability p_number_sub, by a
// uniformly drawn digit string with length in the configured range and no
// leading zero when longer than one digit.
std::string SubstituteNumbers(std::string_view written,
                              const AugmentConfig& cfg);

// Spacing edits restricted to the deviating ranges (codepoint ranges into
// spoken): per internal boundary a space is inserted with p_space_noise, per
// existing space it is deleted with the same probability. Text outside the
// ranges is untouched. out_ranges, when given, receives the deviating ranges
// mapped to output positions. Throws std::invalid_argument on out-of-bounds
// ranges.
std::string AddSpacingNoise(std::string_view spoken,
                            std::span<const CpRange> deviating_ranges,
                            const AugmentConfig& cfg,
                            std::vector<CpRange>* out_ranges = nullptr);

// Full DA pipeline on one record: repetition noise -> number substitution ->
// written*; MTN sampling -> pseudo-spoken; spacing noise on the verbalized
// ranges. Type II/III-with-written yield one augmented record; Type I
// additionally keeps the original pair in front. The per-record RNG seed is
// cfg.seed ^ fnv1a(record.id), so parallel order cannot change outputs.
// Throws std::invalid_argument when the record has no written side.
std::vector<CorpusRecord> AugmentRecord(const CorpusRecord& record,
                                        const VerbalizationGrammar& grammar,
                                        const AugmentConfig& cfg);

// Spacing noise for records that carry a genuine spoken side: deviating
// ranges come from aligning spoken against written with an empty blacklist.
std::string SpacingNoiseForPair(std::string_view spoken,
                                std::string_view written,
                                const AugmentConfig& cfg);

}  // namespace itn

#endif  // ITN_AUGMENT_H_
