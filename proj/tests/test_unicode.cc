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

#include "doctest.h"

using namespace itn;

TEST_SUITE("unicode") {

TEST_CASE("utf8 round trip") {
  std::string text = "사십 명 40% hello";
  CHECK(EncodeUtf8(DecodeUtf8(text)) == text);
  CHECK(CodepointLength("사십") == 2);
  CHECK(CodepointLength("ab") == 2);
}

TEST_CASE("invalid utf8 decodes to replacement") {
  std::string bad = "a\xC0\x80z";
  std::u32string cps = DecodeUtf8(bad);
  CHECK(cps.front() == U'a');
  CHECK(cps.back() == U'z');
  CHECK(!Utf8IsValid(bad));
  CHECK(Utf8IsValid("사십"));
}

TEST_CASE("hangul jamo compose to syllables") {
  std::u32string decomposed = {0x1109, 0x1161};  // ᄉ + ᅡ = 사
  CHECK(NfcNormalize(decomposed) == U"사");
  std::u32string lvt = {0x1106, 0x1167, 0x11BC};  // ᄆ + ᅧ + ᆼ = 명
  CHECK(NfcNormalize(lvt) == U"명");
  // Already-composed text is untouched.
  CHECK(NfcNormalizeUtf8("사십 명") == "사십 명");
  CHECK(NfcNormalizeUtf8("40 items") == "40 items");
}

TEST_CASE("nfc is idempotent") {
  std::u32string decomposed = {0x1109, 0x1161, U' ', 0x1106, 0x1167, 0x11BC};
  std::u32string once = NfcNormalize(decomposed);
  CHECK(NfcNormalize(once) == once);
}

TEST_CASE("whitespace helpers") {
  CHECK(IsUnicodeSpace(U' '));
  CHECK(IsUnicodeSpace(U'\t'));
  CHECK(IsUnicodeSpace(char32_t(0x3000)));
  CHECK(!IsUnicodeSpace(U'a'));
  CHECK(StripWhitespace(U"사 십\t명") == U"사십명");
}

TEST_CASE("script ranges") {
  CHECK(InScript(U'사', HangulScript()));
  CHECK(InScript(0x1109, HangulScript()));
  CHECK(!InScript(U'4', HangulScript()));
  CHECK(InScript(U'x', LatinScript()));
  CHECK(!InScript(U'사', LatinScript()));
}

}  // TEST_SUITE
