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

#include "itn/mtn.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "itn/rng.h"

namespace itn {
namespace {

// Line format: <key> <args...>; values with spaces are double-quoted; '#'
// opens a comment.
std::vector<std::string> TokenizeLine(const std::string& line) {
  std::vector<std::string> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size() || line[i] == '#') break;
    if (line[i] == '"') {
      size_t end = line.find('"', i + 1);
      if (end == std::string::npos)
        throw std::runtime_error("grammar: unterminated quote: " + line);
      tokens.push_back(line.substr(i + 1, end - i - 1));
      i = end + 1;
    } else {
      size_t end = i;
      while (end < line.size() &&
             !std::isspace(static_cast<unsigned char>(line[end])))
        ++end;
      tokens.push_back(line.substr(i, end - i));
      i = end;
    }
  }
  return tokens;
}

int ParseIndex(const std::string& token, const char* what) {
  try {
    return std::stoi(token);
  } catch (...) {
    throw std::runtime_error(std::string("grammar: bad ") + what + ": " +
                             token);
  }
}

uint64_t Pow10(int exponent) {
  uint64_t v = 1;
  for (int i = 0; i < exponent; ++i) v *= 10;
  return v;
}

constexpr const char kBuiltinEn[] = R"(# English number verbalization grammar.
locale en
group_size 3
group_separator ","
token_joiner " "
tens_ones_joiner "-"
strategy digit_by_digit
strategy pair_grouping
strategy cardinal
digit 0 zero
digit 1 one
digit 2 two
digit 3 three
digit 4 four
digit 5 five
digit 6 six
digit 7 seven
digit 8 eight
digit 9 nine
digit_by_digit 0 oh
teen 10 ten
teen 11 eleven
teen 12 twelve
teen 13 thirteen
teen 14 fourteen
teen 15 fifteen
teen 16 sixteen
teen 17 seventeen
teen 18 eighteen
teen 19 nineteen
tens 2 twenty
tens 3 thirty
tens 4 forty
tens 5 fifty
tens 6 sixty
tens 7 seventy
tens 8 eighty
tens 9 ninety
positional 2 hundred
grouping 1 thousand
grouping 2 million
grouping 3 billion
)";

constexpr const char kBuiltinKo[] = R"(# Sino-Korean number verbalization grammar.
locale ko
group_size 4
token_joiner ""
strategy cardinal
strategy digit_by_digit
digit 0 영
digit 1 일
digit 2 이
digit 3 삼
digit 4 사
digit 5 오
digit 6 육
digit 7 칠
digit 8 팔
digit 9 구
positional 1 십 omit_one
positional 2 백 omit_one
positional 3 천 omit_one
grouping 1 만 omit_one
grouping 2 억
grouping 3 조
)";

}  // namespace

VerbalizationGrammar VerbalizationGrammar::FromString(std::string_view text) {
  VerbalizationGrammar g;
  g.digit_names_.resize(10);
  g.digit_by_digit_names_.resize(10);

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = TokenizeLine(line);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    auto need = [&](size_t n) {
      if (tokens.size() < n + 1)
        throw std::runtime_error("grammar: missing arguments: " + line);
    };
    if (key == "locale") {
      need(1);
      g.locale_ = tokens[1];
    } else if (key == "group_size") {
      need(1);
      g.group_size_ = ParseIndex(tokens[1], "group_size");
    } else if (key == "group_separator") {
      need(1);
      std::u32string sep = DecodeUtf8(tokens[1]);
      if (sep.size() != 1)
        throw std::runtime_error("grammar: group_separator must be one char");
      g.group_separator_ = sep[0];
    } else if (key == "token_joiner") {
      need(1);
      g.token_joiner_ = tokens[1];
    } else if (key == "tens_ones_joiner") {
      need(1);
      g.tens_ones_joiner_ = tokens[1];
    } else if (key == "strategy") {
      need(1);
      if (tokens[1] == "digit_by_digit")
        g.strategies_.push_back(ExpansionStrategy::kDigitByDigit);
      else if (tokens[1] == "pair_grouping")
        g.strategies_.push_back(ExpansionStrategy::kPairGrouping);
      else if (tokens[1] == "cardinal")
        g.strategies_.push_back(ExpansionStrategy::kCardinal);
      else
        throw std::runtime_error("grammar: unknown strategy: " + tokens[1]);
    } else if (key == "digit" || key == "digit_by_digit") {
      need(2);
      int d = ParseIndex(tokens[1], "digit");
      if (d < 0 || d > 9)
        throw std::runtime_error("grammar: digit out of range: " + line);
      (key == "digit" ? g.digit_names_ : g.digit_by_digit_names_)[d] =
          tokens[2];
    } else if (key == "teen") {
      need(2);
      g.teen_names_[ParseIndex(tokens[1], "teen")] = tokens[2];
    } else if (key == "tens") {
      need(2);
      g.tens_names_[ParseIndex(tokens[1], "tens")] = tokens[2];
    } else if (key == "positional" || key == "grouping") {
      need(2);
      Unit unit;
      unit.name = tokens[2];
      unit.omit_one = tokens.size() > 3 && tokens[3] == "omit_one";
      (key == "positional" ? g.positional_units_
                           : g.grouping_units_)[ParseIndex(tokens[1], key.c_str())] =
          unit;
    } else {
      throw std::runtime_error("grammar: unknown key: " + key);
    }
  }

  for (int d = 0; d < 10; ++d) {
    if (g.digit_by_digit_names_[d].empty())
      g.digit_by_digit_names_[d] = g.digit_names_[d];
  }
  g.Validate();

  // Spoken-side vocabulary for the inverse parser.
  auto add_word = [&](const std::string& word, SpokenToken token) {
    if (word.empty()) return;
    auto [it, inserted] = g.spoken_vocab_.emplace(word, token);
    if (!inserted && it->second.kind != token.kind)
      throw std::runtime_error("grammar: conflicting roles for word: " + word);
  };
  for (int d = 0; d < 10; ++d) {
    add_word(g.digit_names_[d], {SpokenToken::kDigit, d, 1});
    add_word(g.digit_by_digit_names_[d], {SpokenToken::kDigit, d, 1});
  }
  for (const auto& [value, name] : g.teen_names_)
    add_word(name, {SpokenToken::kTeen, value, 1});
  for (const auto& [tens, name] : g.tens_names_)
    add_word(name, {SpokenToken::kTens, tens * 10, 1});
  for (const auto& [pow, unit] : g.positional_units_)
    add_word(unit.name, {SpokenToken::kPositional, 0, Pow10(pow)});
  for (const auto& [index, unit] : g.grouping_units_)
    add_word(unit.name,
             {SpokenToken::kGrouping, 0, Pow10(index * g.group_size_)});
  return g;
}

VerbalizationGrammar VerbalizationGrammar::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grammar file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromString(buffer.str());
}

const VerbalizationGrammar& VerbalizationGrammar::Builtin(
    std::string_view locale) {
  static const VerbalizationGrammar en = FromString(kBuiltinEn);
  static const VerbalizationGrammar ko = FromString(kBuiltinKo);
  if (locale == "en") return en;
  if (locale == "ko") return ko;
  throw std::runtime_error("unknown builtin grammar: " + std::string(locale));
}

VerbalizationGrammar VerbalizationGrammar::Resolve(
    const std::string& locale_or_path) {
  if (locale_or_path == "en" || locale_or_path == "ko")
    return Builtin(locale_or_path);
  return FromFile(locale_or_path);
}

void VerbalizationGrammar::Validate() const {
  if (locale_.empty()) throw std::runtime_error("grammar: missing locale");
  if (group_size_ != 3 && group_size_ != 4)
    throw std::runtime_error("grammar: group_size must be 3 or 4");
  if (strategies_.empty())
    throw std::runtime_error("grammar: at least one strategy required");
  for (int d = 0; d < 10; ++d) {
    if (digit_names_[d].empty())
      throw std::runtime_error("grammar: digit table not total, missing " +
                               std::to_string(d));
    for (char32_t cp : DecodeUtf8(digit_names_[d])) {
      if (cp >= U'0' && cp <= U'9')
        throw std::runtime_error("grammar: digit name contains a digit");
    }
  }
  bool cardinal = std::find(strategies_.begin(), strategies_.end(),
                            ExpansionStrategy::kCardinal) != strategies_.end();
  if (cardinal && group_size_ == 3 &&
      (teen_names_.size() < 10 || tens_names_.size() < 8)) {
    throw std::runtime_error(
        "grammar: cardinal with group_size 3 requires teen 10..19 and "
        "tens 2..9");
  }
  if (cardinal && group_size_ == 4 && positional_units_.size() < 3) {
    throw std::runtime_error(
        "grammar: cardinal with group_size 4 requires positional 1..3");
  }
}

uint64_t VerbalizationGrammar::MaxCardinal() const {
  int max_group = 0;
  for (const auto& [index, unit] : grouping_units_)
    max_group = std::max(max_group, index);
  return Pow10((max_group + 1) * group_size_) - 1;
}

std::string VerbalizationGrammar::VerbalizeGroup(uint64_t group) const {
  std::vector<std::string> parts;
  if (!tens_names_.empty() || !teen_names_.empty()) {
    // Western style: hundreds, then teens/tens-ones.
    uint64_t hundreds = group / 100;
    uint64_t rest = group % 100;
    if (hundreds > 0) {
      parts.push_back(digit_names_[hundreds]);
      auto it = positional_units_.find(2);
      if (it == positional_units_.end()) return {};
      parts.push_back(it->second.name);
    }
    if (rest > 0) {
      if (rest < 10) {
        parts.push_back(digit_names_[rest]);
      } else if (auto it = teen_names_.find(static_cast<int>(rest));
                 it != teen_names_.end()) {
        parts.push_back(it->second);
      } else {
        auto tens_it = tens_names_.find(static_cast<int>(rest / 10));
        if (tens_it == tens_names_.end()) return {};
        std::string word = tens_it->second;
        if (rest % 10 != 0)
          word += tens_ones_joiner_ + digit_names_[rest % 10];
        parts.push_back(word);
      }
    }
  } else {
    // Positional style: thousands, hundreds, tens within the group, with
    // optional omission of a coefficient of one.
    for (int pow = group_size_ - 1; pow >= 1; --pow) {
      uint64_t digit = (group / Pow10(pow)) % 10;
      if (digit == 0) continue;
      auto it = positional_units_.find(pow);
      if (it == positional_units_.end()) return {};
      if (!(digit == 1 && it->second.omit_one))
        parts.push_back(digit_names_[digit]);
      parts.push_back(it->second.name);
    }
    if (group % 10 != 0) parts.push_back(digit_names_[group % 10]);
  }
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += token_joiner_;
    out += parts[i];
  }
  return out;
}

std::optional<std::string> VerbalizationGrammar::VerbalizeCardinal(
    uint64_t value) const {
  if (value == 0) return digit_names_[0];
  if (value > MaxCardinal()) return std::nullopt;
  const uint64_t group_factor = Pow10(group_size_);
  std::vector<uint64_t> groups;  // low to high
  uint64_t rest = value;
  while (rest > 0) {
    groups.push_back(rest % group_factor);
    rest /= group_factor;
  }
  std::vector<std::string> parts;
  for (size_t k = groups.size(); k-- > 0;) {
    if (groups[k] == 0) continue;
    if (k == 0) {
      parts.push_back(VerbalizeGroup(groups[0]));
      if (parts.back().empty()) return std::nullopt;
      continue;
    }
    auto it = grouping_units_.find(static_cast<int>(k));
    if (it == grouping_units_.end()) return std::nullopt;
    if (groups[k] == 1 && it->second.omit_one) {
      parts.push_back(it->second.name);
    } else {
      std::string words = VerbalizeGroup(groups[k]);
      if (words.empty()) return std::nullopt;
      parts.push_back(words + token_joiner_ + it->second.name);
    }
  }
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += token_joiner_;
    out += parts[i];
  }
  return out;
}

std::string VerbalizationGrammar::VerbalizeDigitByDigit(
    const std::string& digits) const {
  std::string out;
  bool first = true;
  for (char c : digits) {
    if (!first) out += token_joiner_;
    out += digit_by_digit_names_[c - '0'];
    first = false;
  }
  return out;
}

std::optional<std::string> VerbalizationGrammar::VerbalizePair(
    const std::string& digits) const {
  // Year-style reading: two two-digit halves, neither starting with zero.
  if (digits.size() != 4 || digits[0] == '0' || digits[2] == '0')
    return std::nullopt;
  uint64_t hi = (digits[0] - '0') * 10 + (digits[1] - '0');
  uint64_t lo = (digits[2] - '0') * 10 + (digits[3] - '0');
  std::string a = VerbalizeGroup(hi);
  std::string b = VerbalizeGroup(lo);
  if (a.empty() || b.empty()) return std::nullopt;
  return a + token_joiner_ + b;
}

std::optional<VerbalizationGrammar::SpokenToken>
VerbalizationGrammar::LookupSpokenWord(const std::string& word) const {
  auto it = spoken_vocab_.find(word);
  if (it == spoken_vocab_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> VerbalizationGrammar::ExpandSpan(
    const std::string& digits) const {
  std::vector<std::string> variants;
  std::unordered_set<std::string> seen;
  auto add = [&](const std::string& v) {
    if (!v.empty() && seen.insert(v).second) variants.push_back(v);
  };
  const bool leading_zero = digits.size() > 1 && digits[0] == '0';
  for (ExpansionStrategy strategy : strategies_) {
    switch (strategy) {
      case ExpansionStrategy::kDigitByDigit:
        add(VerbalizeDigitByDigit(digits));
        break;
      case ExpansionStrategy::kPairGrouping:
        if (!leading_zero) {
          if (auto v = VerbalizePair(digits)) add(*v);
        }
        break;
      case ExpansionStrategy::kCardinal:
        if (!leading_zero && digits.size() <= 19) {
          if (auto v = VerbalizeCardinal(std::stoull(digits))) add(*v);
        }
        break;
    }
  }
  return variants;
}

namespace {

struct WrittenSpan {
  CpRange range;        // in the written text, codepoints
  std::string digits;   // separators stripped
};

bool IsAsciiDigit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

// Maximal digit spans; a configured group separator is consumed when it sits
// between a digit and a full group of digits ("1,000").
std::vector<WrittenSpan> FindWrittenSpans(const std::u32string& text,
                                          const VerbalizationGrammar& g) {
  std::vector<WrittenSpan> spans;
  const char32_t sep = g.group_separator();
  size_t i = 0;
  while (i < text.size()) {
    if (!IsAsciiDigit(text[i])) {
      ++i;
      continue;
    }
    WrittenSpan span;
    span.range.begin = i;
    while (i < text.size()) {
      if (IsAsciiDigit(text[i])) {
        span.digits.push_back(static_cast<char>(text[i]));
        ++i;
        continue;
      }
      if (sep != 0 && text[i] == sep) {
        // Only a full digit group may follow a separator.
        size_t digits_after = 0;
        size_t j = i + 1;
        while (j < text.size() && IsAsciiDigit(text[j])) {
          ++digits_after;
          ++j;
        }
        if (digits_after == static_cast<size_t>(g.group_size())) {
          ++i;
          continue;
        }
      }
      break;
    }
    span.range.end = i;
    spans.push_back(std::move(span));
  }
  return spans;
}

}  // namespace

std::vector<std::string> EnumerateSpoken(std::string_view written,
                                         const VerbalizationGrammar& grammar,
                                         MtnDiagnostics* diagnostics,
                                         size_t max_variants) {
  const std::u32string text = NfcNormalize(DecodeUtf8(written));
  std::vector<WrittenSpan> spans = FindWrittenSpans(text, grammar);
  if (spans.empty()) return {EncodeUtf8(text)};

  std::vector<std::vector<std::string>> readings(spans.size());
  for (size_t k = 0; k < spans.size(); ++k) {
    readings[k] = grammar.ExpandSpan(spans[k].digits);
    if (readings[k].empty()) {
      if (diagnostics) {
        diagnostics->warnings.push_back("no verbalization rule for span \"" +
                                        spans[k].digits +
                                        "\"; passed through verbatim");
      }
      readings[k].push_back(EncodeUtf8(text.substr(
          spans[k].range.begin, spans[k].range.end - spans[k].range.begin)));
    }
  }

  std::vector<std::string> variants;
  std::unordered_set<std::string> seen;
  std::vector<size_t> choice(spans.size(), 0);
  while (true) {
    std::string out;
    size_t cursor = 0;
    for (size_t k = 0; k < spans.size(); ++k) {
      out += EncodeUtf8(text.substr(cursor, spans[k].range.begin - cursor));
      out += readings[k][choice[k]];
      cursor = spans[k].range.end;
    }
    out += EncodeUtf8(text.substr(cursor));
    if (seen.insert(out).second) {
      variants.push_back(std::move(out));
      if (variants.size() >= max_variants) {
        if (diagnostics) diagnostics->truncated = true;
        break;
      }
    }
    // Odometer: last span varies fastest.
    size_t k = spans.size();
    while (k > 0) {
      --k;
      if (++choice[k] < readings[k].size()) break;
      choice[k] = 0;
      if (k == 0) return variants;
    }
  }
  return variants;
}

SampleResult SampleSpoken(std::string_view written,
                          const VerbalizationGrammar& grammar, uint64_t seed,
                          MtnDiagnostics* diagnostics) {
  const std::u32string text = NfcNormalize(DecodeUtf8(written));
  std::vector<WrittenSpan> spans = FindWrittenSpans(text, grammar);
  SampleResult result;
  SplitMix64 rng(seed);
  std::u32string out;
  size_t cursor = 0;
  for (const auto& span : spans) {
    std::vector<std::string> readings = grammar.ExpandSpan(span.digits);
    out += text.substr(cursor, span.range.begin - cursor);
    cursor = span.range.end;
    if (readings.empty()) {
      if (diagnostics) {
        diagnostics->warnings.push_back("no verbalization rule for span \"" +
                                        span.digits +
                                        "\"; passed through verbatim");
      }
      out += text.substr(span.range.begin, span.range.size());
      continue;
    }
    std::u32string chosen =
        DecodeUtf8(readings[rng.Uniform(readings.size())]);
    result.verbalized_ranges.push_back({out.size(), out.size() + chosen.size()});
    out += chosen;
  }
  out += text.substr(cursor);
  result.text = EncodeUtf8(out);
  return result;
}

TextForm ClassifyForm(std::string_view text, const ScriptRanges& native,
                      std::u32string_view punctuation) {
  const std::u32string cps = NfcNormalize(DecodeUtf8(text));
  for (char32_t cp : cps) {
    if (IsUnicodeSpace(cp)) continue;
    if (punctuation.find(cp) != std::u32string_view::npos) continue;
    if (!InScript(cp, native)) return TextForm::kWritten;
  }
  return TextForm::kSpoken;
}

}  // namespace itn
