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

#ifndef ITN_MTN_H_
#define ITN_MTN_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itn/alignment.h"
#include "itn/unicode.h"

namespace itn {

// How a digit span may be read out. Order in the grammar file defines
// enumeration order.
enum class ExpansionStrategy { kDigitByDigit, kPairGrouping, kCardinal };

// Number verbalization tables for one locale, loaded from a line-based
// key/value file (see data/*.grammar). Immutable after load.
class VerbalizationGrammar {
 public:
  static VerbalizationGrammar FromString(std::string_view text);
  static VerbalizationGrammar FromFile(const std::string& path);
  // "ko" (Sino-Korean) and "en" ship built in; identical to the data files.
  static const VerbalizationGrammar& Builtin(std::string_view locale);
  // Resolves a --grammar argument: builtin locale name or a file path.
  static VerbalizationGrammar Resolve(const std::string& locale_or_path);

  const std::string& locale() const { return locale_; }
  const std::vector<ExpansionStrategy>& strategies() const {
    return strategies_;
  }

  // All readings of one digit span (leading-zero spans only get the
  // digit-by-digit reading). Never emits digit characters; deduplicated.
  std::vector<std::string> ExpandSpan(const std::string& digits) const;

  // Single-strategy verbalizers. Return nullopt when the strategy does not
  // apply to the span.
  std::optional<std::string> VerbalizeCardinal(uint64_t value) const;
  std::string VerbalizeDigitByDigit(const std::string& digits) const;
  std::optional<std::string> VerbalizePair(const std::string& digits) const;

  // Spoken-side vocabulary, used by the rule-based backend's inverse parser.
  struct SpokenToken {
    enum Kind { kDigit, kTeen, kTens, kPositional, kGrouping } kind;
    int value = 0;       // digit value, teen value, tens value
    uint64_t factor = 1; // positional/grouping multiplier
  };
  std::optional<SpokenToken> LookupSpokenWord(const std::string& word) const;
  bool SpaceSeparated() const { return !token_joiner_.empty(); }
  const std::string& token_joiner() const { return token_joiner_; }
  const std::string& tens_ones_joiner() const { return tens_ones_joiner_; }
  char32_t group_separator() const { return group_separator_; }
  int group_size() const { return group_size_; }
  uint64_t MaxCardinal() const;

 private:
  friend class NumberParser;

  void Validate() const;
  std::string VerbalizeGroup(uint64_t group) const;

  std::string locale_;
  int group_size_ = 3;
  char32_t group_separator_ = 0;
  std::string token_joiner_;
  std::string tens_ones_joiner_;
  std::vector<ExpansionStrategy> strategies_;
  std::vector<std::string> digit_names_;          // 0..9
  std::vector<std::string> digit_by_digit_names_; // 0..9, defaults to digits
  std::map<int, std::string> teen_names_;         // 10..19
  std::map<int, std::string> tens_names_;         // 2..9 -> 20..90
  // positional: power of ten inside a group -> name; omit flag drops a
  // leading coefficient of one (Sino-Korean style).
  struct Unit {
    std::string name;
    bool omit_one = false;
  };
  std::map<int, Unit> positional_units_;
  std::map<int, Unit> grouping_units_;  // group index -> name (10^(k*size))
  std::map<std::string, SpokenToken> spoken_vocab_;
};

struct MtnDiagnostics {
  std::vector<std::string> warnings;
  bool truncated = false;
};

inline constexpr size_t kDefaultMaxVariants = 256;

// All distinct verbalizations of the written text: cross-product of per-span
// readings in deterministic order (spans left to right, strategies in
// grammar order). Text outside digit spans is unchanged in every variant.
std::vector<std::string> EnumerateSpoken(std::string_view written,
                                         const VerbalizationGrammar& grammar,
                                         MtnDiagnostics* diagnostics = nullptr,
                                         size_t max_variants =
                                             kDefaultMaxVariants);

struct SampleResult {
  std::string text;
  // Codepoint ranges of the spliced verbalizations in text, for
  // region-restricted spacing noise.
  std::vector<CpRange> verbalized_ranges;
};

// Uniform per-span choice among that span's readings, driven by a
// deterministic seeded RNG. Same (written, seed) gives the same output.
SampleResult SampleSpoken(std::string_view written,
                          const VerbalizationGrammar& grammar, uint64_t seed,
                          MtnDiagnostics* diagnostics = nullptr);

enum class TextForm { kSpoken, kWritten };

// Written iff the text contains a character outside the native script,
// whitespace and the punctuation set.
TextForm ClassifyForm(std::string_view text, const ScriptRanges& native,
                      std::u32string_view punctuation = U".,!?\"'");

}  // namespace itn

#endif  // ITN_MTN_H_
