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

#include "itn/augment.h"

#include <stdexcept>

#include "itn/rng.h"
#include "itn/unicode.h"

namespace itn {

uint64_t RecordSeed(uint64_t base_seed, std::string_view record_id,
                    uint64_t stage) {
  return base_seed ^ Fnv1a64(record_id) ^ stage;
}

std::string AddRepetitionNoise(std::string_view written,
                               const AugmentConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const std::u32string text = NfcNormalize(DecodeUtf8(written));
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (IsUnicodeSpace(text[i])) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < text.size() && !IsUnicodeSpace(text[i])) ++i;
    std::u32string word = text.substr(begin, i - begin);
    out += word;
    // Draw discipline: one Bernoulli per word; one Uniform when it fires.
    if (rng.Bernoulli(cfg.p_repeat)) {
      uint64_t extra = 1 + rng.Uniform(std::max(1, cfg.max_repeats));
      for (uint64_t k = 0; k < extra; ++k) {
        out.push_back(U' ');
        out += word;
      }
    }
  }
  return EncodeUtf8(out);
}

std::string SubstituteNumbers(std::string_view written,
                              const AugmentConfig& cfg) {
  if (cfg.sub_digit_len_min < 1 || cfg.sub_digit_len_max < cfg.sub_digit_len_min)
    throw std::invalid_argument("substitute_numbers: empty length range");
  SplitMix64 rng(cfg.seed);
  const std::u32string text = NfcNormalize(DecodeUtf8(written));
  std::u32string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] < U'0' || text[i] > U'9') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < text.size() && text[i] >= U'0' && text[i] <= U'9') ++i;
    if (rng.Bernoulli(cfg.p_number_sub)) {
      uint64_t length =
          cfg.sub_digit_len_min +
          rng.Uniform(cfg.sub_digit_len_max - cfg.sub_digit_len_min + 1);
      for (uint64_t k = 0; k < length; ++k) {
        uint64_t digit =
            (k == 0 && length > 1) ? 1 + rng.Uniform(9) : rng.Uniform(10);
        out.push_back(static_cast<char32_t>(U'0' + digit));
      }
    } else {
      out += text.substr(begin, i - begin);
    }
  }
  return EncodeUtf8(out);
}

std::string AddSpacingNoise(std::string_view spoken,
                            std::span<const CpRange> deviating_ranges,
                            const AugmentConfig& cfg,
                            std::vector<CpRange>* out_ranges) {
  const std::u32string text = NfcNormalize(DecodeUtf8(spoken));
  size_t last_end = 0;
  for (const auto& range : deviating_ranges) {
    if (range.begin < last_end || range.end > text.size() ||
        range.begin > range.end) {
      throw std::invalid_argument("spacing noise: range out of bounds");
    }
    last_end = range.end;
  }
  SplitMix64 rng(cfg.seed);
  std::u32string out;
  out.reserve(text.size() + 8);
  if (out_ranges) out_ranges->clear();
  size_t cursor = 0;
  for (const auto& range : deviating_ranges) {
    out += text.substr(cursor, range.begin - cursor);
    size_t out_begin = out.size();
    for (size_t p = range.begin; p < range.end; ++p) {
      if (p > range.begin && rng.Bernoulli(cfg.p_space_noise)) {
        out.push_back(U' ');
      }
      if (IsUnicodeSpace(text[p])) {
        if (!rng.Bernoulli(cfg.p_space_noise)) out.push_back(text[p]);
      } else {
        out.push_back(text[p]);
      }
    }
    if (out_ranges) out_ranges->push_back({out_begin, out.size()});
    cursor = range.end;
  }
  out += text.substr(cursor);
  return EncodeUtf8(out);
}

std::string SpacingNoiseForPair(std::string_view spoken,
                                std::string_view written,
                                const AugmentConfig& cfg) {
  AlignmentPath path = AlignUtf8(spoken, written);
  std::vector<NormalizationPair> pairs = ExtractPairs(path, Blacklist());
  std::vector<CpRange> ranges;
  ranges.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (pair.s_range.size() > 0) ranges.push_back(pair.s_range);
  }
  return AddSpacingNoise(spoken, ranges, cfg);
}

std::vector<CorpusRecord> AugmentRecord(const CorpusRecord& record,
                                        const VerbalizationGrammar& grammar,
                                        const AugmentConfig& cfg) {
  if (!record.written) {
    throw std::invalid_argument("augment_record: record " + record.id +
                                " has no written side");
  }

  AugmentConfig stage = cfg;
  stage.seed = RecordSeed(cfg.seed, record.id, kStageRepetition);
  std::string written_star = AddRepetitionNoise(*record.written, stage);
  stage.seed = RecordSeed(cfg.seed, record.id, kStageNumberSub);
  written_star = SubstituteNumbers(written_star, stage);

  SampleResult sample = SampleSpoken(
      written_star, grammar, RecordSeed(cfg.seed, record.id, kStageSampling));
  stage.seed = RecordSeed(cfg.seed, record.id, kStageSpacing);
  std::string pseudo_spoken =
      AddSpacingNoise(sample.text, sample.verbalized_ranges, stage);

  CorpusRecord augmented;
  augmented.id = record.id + "#da";
  augmented.spoken = pseudo_spoken;
  augmented.written = written_star;
  augmented.dataset_type = DatasetType::kTypeI;
  augmented.provenance = record.provenance;
  augmented.provenance.push_back("da");
  NormalizeRecord(&augmented);

  std::vector<CorpusRecord> out;
  if (record.dataset_type == DatasetType::kTypeI) {
    // The original pair keeps feeding training directly; the augmented pair
    // rides along as a second record.
    out.push_back(record);
  }
  out.push_back(std::move(augmented));
  return out;
}

}  // namespace itn
