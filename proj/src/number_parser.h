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

#ifndef ITN_SRC_NUMBER_PARSER_H_
#define ITN_SRC_NUMBER_PARSER_H_

#include <optional>
#include <string>
#include <vector>

#include "itn/alignment.h"
#include "itn/mtn.h"

namespace itn {

// Inverse of the verbalization grammar: locates verbalized numeric segments
// in spoken text and recovers their digit readings. Candidate parses are
// validated by re-verbalization, so the parser accepts exactly what the
// grammar can emit (plus whitespace-split variants of it).
class NumberParser {
 public:
  explicit NumberParser(const VerbalizationGrammar& grammar);

  struct SegmentParse {
    std::vector<std::string> numbers;  // digit strings, left to right
    int penalty = 0;                   // splits relative to the maximal span
  };
  struct Segment {
    CpRange range;                     // codepoints into the spoken text
    std::vector<SegmentParse> parses;  // ascending penalty; never empty
  };

  // Segments in text order. Single number-vocabulary characters embedded in
  // longer words are not treated as numbers (a run must cover its whole word
  // or span at least two characters).
  std::vector<Segment> FindSegments(const std::u32string& spoken) const;

  // One contiguous character run as a single number (joiner-free locales).
  std::optional<std::string> ParseRun(const std::u32string& run) const;

 private:
  struct Piece {
    CpRange range;
    std::string digits;
    bool at_word_start = false;
    bool at_word_end = false;
  };

  std::optional<std::string> ParseCardinalParts(
      const std::vector<std::string>& parts) const;
  std::optional<std::string> ParseDigitParts(
      const std::vector<std::string>& parts) const;
  std::vector<SegmentParse> ParseWordSegment(
      const std::vector<std::vector<std::string>>& word_parts) const;
  std::vector<Segment> FindSegmentsSpaceSeparated(
      const std::u32string& spoken) const;
  std::vector<Segment> FindSegmentsCharRuns(const std::u32string& spoken) const;

  const VerbalizationGrammar& grammar_;
};

}  // namespace itn

#endif  // ITN_SRC_NUMBER_PARSER_H_
