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

#include "itn/unicode.h"

#include <array>

namespace itn {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Hangul syllable composition constants (Unicode 3.12).
constexpr char32_t kSBase = 0xAC00;
constexpr char32_t kLBase = 0x1100;
constexpr char32_t kVBase = 0x1161;
constexpr char32_t kTBase = 0x11A7;
constexpr int kLCount = 19;
constexpr int kVCount = 21;
constexpr int kTCount = 28;
constexpr int kSCount = 11172;

bool IsLeadJamo(char32_t cp) { return cp >= kLBase && cp < kLBase + kLCount; }
bool IsVowelJamo(char32_t cp) { return cp >= kVBase && cp < kVBase + kVCount; }
bool IsTrailJamo(char32_t cp) {
  return cp > kTBase && cp < kTBase + kTCount;
}
bool IsLvSyllable(char32_t cp) {
  return cp >= kSBase && cp < kSBase + kSCount && (cp - kSBase) % kTCount == 0;
}

// Decodes one codepoint starting at i; advances i past it. Returns false on
// malformed input (i is advanced by one byte and cp set to U+FFFD).
bool DecodeOne(std::string_view s, size_t& i, char32_t& cp) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    cp = b0;
    ++i;
    return true;
  }
  int len = 0;
  char32_t acc = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    acc = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    acc = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    acc = b0 & 0x07;
  } else {
    cp = kReplacement;
    ++i;
    return false;
  }
  if (i + len > s.size()) {
    cp = kReplacement;
    ++i;
    return false;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      cp = kReplacement;
      ++i;
      return false;
    }
    acc = (acc << 6) | (b & 0x3F);
  }
  // Reject overlong forms and surrogates.
  static constexpr std::array<char32_t, 5> kMin = {0, 0, 0x80, 0x800, 0x10000};
  if (acc < kMin[len] || acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF)) {
    cp = kReplacement;
    ++i;
    return false;
  }
  cp = acc;
  i += len;
  return true;
}

}  // namespace

std::u32string DecodeUtf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  size_t i = 0;
  while (i < utf8.size()) {
    char32_t cp;
    DecodeOne(utf8, i, cp);
    out.push_back(cp);
  }
  return out;
}

bool Utf8IsValid(std::string_view utf8) {
  size_t i = 0;
  while (i < utf8.size()) {
    char32_t cp;
    if (!DecodeOne(utf8, i, cp)) return false;
  }
  return true;
}

std::string EncodeUtf8(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 3);
  for (char32_t cp : codepoints) {
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::u32string NfcNormalize(std::u32string text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (!out.empty()) {
      char32_t prev = out.back();
      if (IsLeadJamo(prev) && IsVowelJamo(cp)) {
        out.back() = kSBase + ((prev - kLBase) * kVCount + (cp - kVBase)) *
                                  kTCount;
        continue;
      }
      if (IsLvSyllable(prev) && IsTrailJamo(cp)) {
        out.back() = prev + (cp - kTBase);
        continue;
      }
    }
    out.push_back(cp);
  }
  return out;
}

std::string NfcNormalizeUtf8(std::string_view utf8) {
  return EncodeUtf8(NfcNormalize(DecodeUtf8(utf8)));
}

bool IsUnicodeSpace(char32_t cp) {
  switch (cp) {
    case 0x09:
    case 0x0A:
    case 0x0B:
    case 0x0C:
    case 0x0D:
    case 0x20:
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

std::u32string StripWhitespace(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (!IsUnicodeSpace(cp)) out.push_back(cp);
  }
  return out;
}

bool InScript(char32_t cp, const ScriptRanges& ranges) {
  for (const auto& r : ranges) {
    if (cp >= r.lo && cp <= r.hi) return true;
  }
  return false;
}

const ScriptRanges& HangulScript() {
  static const ScriptRanges ranges = {{0xAC00, 0xD7A3}, {0x1100, 0x11FF}};
  return ranges;
}

const ScriptRanges& LatinScript() {
  static const ScriptRanges ranges = {
      {U'A', U'Z'}, {U'a', U'z'}, {0xC0, 0xFF}};
  return ranges;
}

size_t CodepointLength(std::string_view utf8) {
  size_t n = 0;
  size_t i = 0;
  while (i < utf8.size()) {
    char32_t cp;
    DecodeOne(utf8, i, cp);
    ++n;
  }
  return n;
}

}  // namespace itn
