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

#ifndef ITN_UNICODE_H_
#define ITN_UNICODE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace itn {

// Decodes UTF-8 into Unicode scalar values. Invalid byte sequences decode to
// U+FFFD so corpus processing never aborts mid-stream; strict callers can
// check with Utf8IsValid first.
std::u32string DecodeUtf8(std::string_view utf8);
std::string EncodeUtf8(std::u32string_view codepoints);
bool Utf8IsValid(std::string_view utf8);

// Canonical composition for Hangul: conjoining Jamo sequences (L, V, T in
// U+1100..U+11C2) are composed into syllable blocks (U+AC00..U+D7A3).
// Korean text and ASCII are NFC-stable under this pass; other scripts are
// passed through unchanged.
std::u32string NfcNormalize(std::u32string text);
std::string NfcNormalizeUtf8(std::string_view utf8);

bool IsUnicodeSpace(char32_t cp);
std::u32string StripWhitespace(std::u32string_view text);

// Inclusive codepoint interval.
struct CodepointRange {
  char32_t lo = 0;
  char32_t hi = 0;
};

using ScriptRanges = std::vector<CodepointRange>;

bool InScript(char32_t cp, const ScriptRanges& ranges);

// Hangul syllables (U+AC00..U+D7A3) plus conjoining Jamo (U+1100..U+11FF).
const ScriptRanges& HangulScript();
// Basic Latin letters plus Latin-1 letter supplement.
const ScriptRanges& LatinScript();

size_t CodepointLength(std::string_view utf8);

}  // namespace itn

#endif  // ITN_UNICODE_H_
