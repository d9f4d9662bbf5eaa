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

#include "number_parser.h"

#include <algorithm>

#include "itn/unicode.h"

namespace itn {
namespace {

using SpokenToken = VerbalizationGrammar::SpokenToken;

std::vector<std::pair<CpRange, std::u32string>> SplitWords(
    const std::u32string& text) {
  std::vector<std::pair<CpRange, std::u32string>> words;
  size_t i = 0;
  while (i < text.size()) {
    if (IsUnicodeSpace(text[i])) {
      ++i;
      continue;
    }
    size_t begin = i;
    while (i < text.size() && !IsUnicodeSpace(text[i])) ++i;
    words.push_back({{begin, i}, text.substr(begin, i - begin)});
  }
  return words;
}

// True when the gap [a, b) contains whitespace only.
bool WhitespaceGap(const std::u32string& text, size_t a, size_t b) {
  for (size_t i = a; i < b; ++i) {
    if (!IsUnicodeSpace(text[i])) return false;
  }
  return true;
}

std::string JoinDigits(const std::vector<std::string>& numbers) {
  std::string out;
  for (size_t i = 0; i < numbers.size(); ++i) {
    if (i > 0) out += ' ';
    out += numbers[i];
  }
  return out;
}

}  // namespace

NumberParser::NumberParser(const VerbalizationGrammar& grammar)
    : grammar_(grammar) {}

std::optional<std::string> NumberParser::ParseRun(
    const std::u32string& run) const {
  if (run.empty()) return std::nullopt;
  // Positional reading (e.g. thousands/hundreds/tens units), validated by
  // re-verbalization so only canonical sequences parse.
  {
    uint64_t total = 0;
    uint64_t group = 0;
    int pending = -1;
    bool ok = true;
    for (char32_t cp : run) {
      auto tok = grammar_.LookupSpokenWord(EncodeUtf8(std::u32string(1, cp)));
      if (!tok) {
        ok = false;
        break;
      }
      switch (tok->kind) {
        case SpokenToken::kDigit:
          if (pending >= 0) {
            ok = false;
          } else {
            pending = tok->value;
          }
          break;
        case SpokenToken::kPositional: {
          uint64_t coef = pending > 0 ? static_cast<uint64_t>(pending) : 1;
          if (pending == 0) ok = false;
          group += coef * tok->factor;
          pending = -1;
          break;
        }
        case SpokenToken::kGrouping: {
          uint64_t value = group + (pending > 0 ? pending : 0);
          if (pending == 0) ok = false;
          if (value == 0) value = 1;  // bare grouping unit
          total += value * tok->factor;
          group = 0;
          pending = -1;
          break;
        }
        default:
          ok = false;
          break;
      }
      if (!ok) break;
    }
    if (ok) {
      uint64_t value = total + group + (pending > 0 ? pending : 0);
      if (pending == 0 && run.size() > 1) ok = false;
      if (ok) {
        auto back = grammar_.VerbalizeCardinal(value);
        if (back && DecodeUtf8(*back) == run) return std::to_string(value);
      }
    }
  }
  // Digit-by-digit reading; preserves leading zeros.
  std::string digits;
  for (char32_t cp : run) {
    auto tok = grammar_.LookupSpokenWord(EncodeUtf8(std::u32string(1, cp)));
    if (!tok || tok->kind != SpokenToken::kDigit) return std::nullopt;
    digits.push_back(static_cast<char>('0' + tok->value));
  }
  return digits;
}

std::optional<std::string> NumberParser::ParseCardinalParts(
    const std::vector<std::string>& parts) const {
  uint64_t total = 0;
  uint64_t acc = 0;
  for (const auto& part : parts) {
    auto tok = grammar_.LookupSpokenWord(part);
    if (!tok) return std::nullopt;
    switch (tok->kind) {
      case SpokenToken::kDigit:
      case SpokenToken::kTeen:
      case SpokenToken::kTens:
        acc += tok->value;
        break;
      case SpokenToken::kPositional:
        if (acc == 0) return std::nullopt;
        acc *= tok->factor;
        break;
      case SpokenToken::kGrouping:
        if (acc == 0) return std::nullopt;
        total += acc * tok->factor;
        acc = 0;
        break;
    }
  }
  uint64_t value = total + acc;
  auto back = grammar_.VerbalizeCardinal(value);
  if (!back) return std::nullopt;
  // Compare with the tens-ones joiner flattened away, so "twenty four" and
  // "twenty-four" both parse.
  std::string joined;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) joined += grammar_.token_joiner();
    joined += parts[i];
  }
  std::string canonical = *back;
  if (!grammar_.tens_ones_joiner().empty()) {
    size_t pos;
    while ((pos = canonical.find(grammar_.tens_ones_joiner())) !=
           std::string::npos) {
      canonical.replace(pos, grammar_.tens_ones_joiner().size(),
                        grammar_.token_joiner());
    }
  }
  if (canonical != joined) return std::nullopt;
  return std::to_string(value);
}

std::optional<std::string> NumberParser::ParseDigitParts(
    const std::vector<std::string>& parts) const {
  std::string digits;
  for (const auto& part : parts) {
    auto tok = grammar_.LookupSpokenWord(part);
    if (!tok || tok->kind != SpokenToken::kDigit) return std::nullopt;
    digits.push_back(static_cast<char>('0' + tok->value));
  }
  return digits.empty() ? std::nullopt : std::optional(digits);
}

std::vector<NumberParser::SegmentParse> NumberParser::ParseWordSegment(
    const std::vector<std::vector<std::string>>& word_parts) const {
  std::vector<SegmentParse> parses;
  std::vector<std::string> seen;
  auto add = [&](std::vector<std::string> numbers, int penalty) {
    std::string key = JoinDigits(numbers);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) return;
    seen.push_back(std::move(key));
    parses.push_back({std::move(numbers), penalty});
  };

  std::vector<std::string> flat;
  for (const auto& parts : word_parts)
    flat.insert(flat.end(), parts.begin(), parts.end());

  // Whole-segment readings: cardinal, digit-by-digit, then the year-style
  // two-halves reading.
  if (auto v = ParseCardinalParts(flat)) add({*v}, 0);
  if (auto v = ParseDigitParts(flat)) add({*v}, 0);
  bool pair_enabled =
      std::find(grammar_.strategies().begin(), grammar_.strategies().end(),
                ExpansionStrategy::kPairGrouping) != grammar_.strategies().end();
  if (pair_enabled && flat.size() >= 2) {
    for (size_t split = 1; split < flat.size(); ++split) {
      std::vector<std::string> hi(flat.begin(), flat.begin() + split);
      std::vector<std::string> lo(flat.begin() + split, flat.end());
      auto hi_v = ParseCardinalParts(hi);
      auto lo_v = ParseCardinalParts(lo);
      if (hi_v && lo_v && hi_v->size() == 2 && lo_v->size() == 2 &&
          (*hi_v)[0] != '0' && (*lo_v)[0] != '0') {
        add({*hi_v + *lo_v}, 0);
      }
    }
  }

  // Fully split reading: one number per word.
  if (word_parts.size() >= 2) {
    std::vector<std::string> numbers;
    bool ok = true;
    for (const auto& parts : word_parts) {
      auto v = ParseCardinalParts(parts);
      if (!v) v = ParseDigitParts(parts);
      if (!v) {
        ok = false;
        break;
      }
      numbers.push_back(*v);
    }
    if (ok) add(std::move(numbers), static_cast<int>(word_parts.size()) - 1);
  }

  std::stable_sort(parses.begin(), parses.end(),
                   [](const SegmentParse& a, const SegmentParse& b) {
                     return a.penalty < b.penalty;
                   });
  return parses;
}

std::vector<NumberParser::Segment> NumberParser::FindSegmentsSpaceSeparated(
    const std::u32string& spoken) const {
  std::vector<Segment> segments;
  auto words = SplitWords(spoken);

  // Split each word on the tens-ones joiner; a word is number material when
  // every part is in the spoken vocabulary.
  std::vector<std::vector<std::string>> parts_per_word(words.size());
  std::vector<bool> numberish(words.size(), false);
  const std::string& joiner = grammar_.tens_ones_joiner();
  for (size_t w = 0; w < words.size(); ++w) {
    std::string utf8 = EncodeUtf8(words[w].second);
    std::vector<std::string> parts;
    if (!joiner.empty()) {
      size_t start = 0;
      size_t pos;
      while ((pos = utf8.find(joiner, start)) != std::string::npos) {
        parts.push_back(utf8.substr(start, pos - start));
        start = pos + joiner.size();
      }
      parts.push_back(utf8.substr(start));
    } else {
      parts.push_back(utf8);
    }
    bool all = !parts.empty();
    for (const auto& part : parts) {
      if (!grammar_.LookupSpokenWord(part)) {
        all = false;
        break;
      }
    }
    numberish[w] = all;
    if (all) parts_per_word[w] = std::move(parts);
  }

  size_t w = 0;
  while (w < words.size()) {
    if (!numberish[w]) {
      ++w;
      continue;
    }
    size_t end = w + 1;
    while (end < words.size() && numberish[end]) ++end;
    std::vector<std::vector<std::string>> segment_parts(
        parts_per_word.begin() + w, parts_per_word.begin() + end);
    auto parses = ParseWordSegment(segment_parts);
    if (!parses.empty()) {
      segments.push_back(
          {{words[w].first.begin, words[end - 1].first.end}, std::move(parses)});
    }
    w = end;
  }
  return segments;
}

std::vector<NumberParser::Segment> NumberParser::FindSegmentsCharRuns(
    const std::u32string& spoken) const {
  auto words = SplitWords(spoken);

  // Within each word, the maximal run of number-vocabulary characters. A run
  // must cover the whole word or span at least two characters, so single
  // number syllables inside ordinary words are left alone.
  std::vector<Piece> pieces;
  for (const auto& [range, word] : words) {
    size_t i = 0;
    while (i < word.size()) {
      if (!grammar_.LookupSpokenWord(EncodeUtf8(std::u32string(1, word[i])))) {
        ++i;
        continue;
      }
      size_t begin = i;
      while (i < word.size() &&
             grammar_.LookupSpokenWord(EncodeUtf8(std::u32string(1, word[i]))))
        ++i;
      std::u32string run = word.substr(begin, i - begin);
      bool whole_word = begin == 0 && i == word.size();
      if (!whole_word && run.size() < 2) continue;
      auto digits = ParseRun(run);
      if (!digits) continue;
      Piece piece;
      piece.range = {range.begin + begin, range.begin + i};
      piece.digits = *digits;
      piece.at_word_start = begin == 0;
      piece.at_word_end = i == word.size();
      pieces.push_back(std::move(piece));
    }
  }

  std::vector<Segment> segments;
  size_t p = 0;
  while (p < pieces.size()) {
    // Chain pieces separated by whitespace only; spacing noise splits
    // numbers across words and the chain re-joins them.
    size_t end = p + 1;
    while (end < pieces.size() && pieces[end - 1].at_word_end &&
           pieces[end].at_word_start &&
           WhitespaceGap(spoken, pieces[end - 1].range.end,
                         pieces[end].range.begin)) {
      ++end;
    }
    Segment segment;
    segment.range = {pieces[p].range.begin, pieces[end - 1].range.end};
    std::vector<std::string> split_numbers;
    std::u32string concat;
    for (size_t k = p; k < end; ++k) {
      split_numbers.push_back(pieces[k].digits);
      concat += spoken.substr(pieces[k].range.begin, pieces[k].range.size());
    }
    if (end - p > 1) {
      if (auto composed = ParseRun(concat)) {
        segment.parses.push_back({{*composed}, 0});
      }
      std::string composed_key =
          segment.parses.empty() ? "" : segment.parses[0].numbers[0];
      if (JoinDigits(split_numbers) != composed_key) {
        segment.parses.push_back(
            {std::move(split_numbers), static_cast<int>(end - p) - 1});
      }
    } else {
      segment.parses.push_back({{pieces[p].digits}, 0});
    }
    segments.push_back(std::move(segment));
    p = end;
  }
  return segments;
}

std::vector<NumberParser::Segment> NumberParser::FindSegments(
    const std::u32string& spoken) const {
  return grammar_.SpaceSeparated() ? FindSegmentsSpaceSeparated(spoken)
                                   : FindSegmentsCharRuns(spoken);
}

}  // namespace itn
