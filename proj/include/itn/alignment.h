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

#ifndef ITN_ALIGNMENT_H_
#define ITN_ALIGNMENT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace itn {

// Step kinds follow the hypothesis-vs-reference convention used for error
// attribution: Insert consumes a source character only (extra source text),
// Delete consumes a target character only (target text missing from source).
enum class StepKind { kMatch, kSubstitute, kInsert, kDelete };

struct AlignmentStep {
  StepKind kind = StepKind::kMatch;
  std::optional<size_t> source_index;
  std::optional<size_t> target_index;
  size_t cumulative_cost = 0;
};

struct AlignmentPath {
  std::u32string source;  // spoken side (column axis)
  std::u32string target;  // written side (row axis)
  std::vector<AlignmentStep> steps;

  size_t Cost() const { return steps.empty() ? 0 : steps.back().cumulative_cost; }
};

// Half-open codepoint range.
struct CpRange {
  size_t begin = 0;
  size_t end = 0;

  size_t size() const { return end - begin; }
  bool Overlaps(const CpRange& other) const {
    return begin < other.end && other.begin < end;
  }
  bool operator==(const CpRange& other) const = default;
};

// One normalization region: spoken span s is replaced by written span w.
// A pair with empty w is a deletion normalization; empty s is an insertion.
struct NormalizationPair {
  std::u32string s;
  std::u32string w;
  CpRange s_range;
  CpRange w_range;

  std::string SUtf8() const;
  std::string WUtf8() const;
  bool operator==(const NormalizationPair& other) const = default;
};

// Characters that may not terminate a normalization region during
// extraction. Membership is exact codepoint equality after NFC.
class Blacklist {
 public:
  Blacklist() = default;
  explicit Blacklist(std::u32string_view chars);
  static Blacklist SpaceOnly();

  bool Contains(char32_t cp) const { return chars_.count(cp) > 0; }
  bool Empty() const { return chars_.empty(); }
  std::u32string Chars() const;

 private:
  std::unordered_set<char32_t> chars_;
};

size_t LevenshteinDistance(std::u32string_view a, std::u32string_view b);

// Minimal-cost unit-cost edit path. Ties are broken deterministically while
// walking from (0,0): Match, then Substitute, then Delete (target-consuming),
// then Insert (source-consuming), so written targets attach to the leftmost
// deviating source characters.
AlignmentPath Align(std::u32string_view source, std::u32string_view target);
AlignmentPath AlignUtf8(std::string_view source, std::string_view target);

// Walks the path and cuts it into normalization regions. A region opens at
// the first step whose cumulative cost exceeds the previous step's and closes
// at the next cost plateau (a Match) whose source character is not
// blacklisted; blacklisted matches are passed over and extend the region.
// A region still open at path end closes there. Returned pairs are
// non-overlapping, ordered by s_range, and always have s != w.
std::vector<NormalizationPair> ExtractPairs(const AlignmentPath& path,
                                            const Blacklist& blacklist);

// Replaces each pair's s_range in source with its w. Pairs must be sorted,
// non-overlapping, and in bounds; throws std::invalid_argument otherwise.
std::u32string ApplyPairs(std::u32string_view source,
                          std::span<const NormalizationPair> pairs);
std::string ApplyPairsUtf8(std::string_view source,
                           std::span<const NormalizationPair> pairs);

}  // namespace itn

#endif  // ITN_ALIGNMENT_H_
