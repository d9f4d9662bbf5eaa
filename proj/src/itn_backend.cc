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

#include "itn/itn_backend.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "itn/rng.h"
#include "itn/unicode.h"
#include "number_parser.h"

namespace itn {

std::vector<HypothesisSet> Backend::InferBatch(
    const std::vector<std::string>& record_ids,
    const std::vector<std::string>& spoken_texts) {
  std::vector<HypothesisSet> out;
  out.reserve(record_ids.size());
  for (size_t i = 0; i < record_ids.size(); ++i) {
    out.push_back(Infer(record_ids[i], spoken_texts[i]));
  }
  return out;
}

namespace {

class RuleBasedBackend : public Backend {
 public:
  RuleBasedBackend(VerbalizationGrammar grammar, int n_best)
      : grammar_(std::move(grammar)), parser_(grammar_), n_best_(n_best) {}

  HypothesisSet Infer(std::string_view record_id,
                      std::string_view spoken) override {
    const std::u32string text = NfcNormalize(DecodeUtf8(spoken));
    HypothesisSet set;
    set.record_id = std::string(record_id);
    set.spoken = EncodeUtf8(text);

    auto segments = parser_.FindSegments(text);
    if (segments.empty()) {
      set.hypotheses.push_back({set.spoken, 0.0});
      return set;
    }

    // Every combination of per-segment parses, ranked by total penalty in
    // excess of the per-segment minima; the 1-best is the maximal-span parse.
    int min_total = 0;
    for (const auto& segment : segments)
      min_total += segment.parses.front().penalty;

    struct Combo {
      int excess = 0;
      std::vector<size_t> choices;
    };
    std::vector<Combo> combos{{0, {}}};
    constexpr size_t kMaxCombos = 256;
    for (const auto& segment : segments) {
      std::vector<Combo> next;
      for (const auto& combo : combos) {
        for (size_t c = 0; c < segment.parses.size(); ++c) {
          Combo extended = combo;
          extended.excess += segment.parses[c].penalty;
          extended.choices.push_back(c);
          next.push_back(std::move(extended));
          if (next.size() >= kMaxCombos) break;
        }
        if (next.size() >= kMaxCombos) break;
      }
      combos = std::move(next);
    }
    std::stable_sort(combos.begin(), combos.end(),
                     [](const Combo& a, const Combo& b) {
                       return a.excess < b.excess;
                     });

    std::unordered_set<std::string> seen;
    for (const auto& combo : combos) {
      if (static_cast<int>(set.hypotheses.size()) >= n_best_) break;
      std::u32string out;
      size_t cursor = 0;
      for (size_t s = 0; s < segments.size(); ++s) {
        const auto& segment = segments[s];
        const auto& parse = segment.parses[combo.choices[s]];
        out += text.substr(cursor, segment.range.begin - cursor);
        for (size_t k = 0; k < parse.numbers.size(); ++k) {
          if (k > 0) out += U' ';
          out += DecodeUtf8(parse.numbers[k]);
        }
        cursor = segment.range.end;
      }
      out += text.substr(cursor);
      std::string utf8 = EncodeUtf8(out);
      if (!seen.insert(utf8).second) continue;
      set.hypotheses.push_back(
          {std::move(utf8), -static_cast<double>(combo.excess - min_total)});
    }
    return set;
  }

 private:
  VerbalizationGrammar grammar_;
  NumberParser parser_;
  int n_best_;
};

bool ContainsAsciiDigit(const std::u32string& word) {
  for (char32_t cp : word) {
    if (cp >= U'0' && cp <= U'9') return true;
  }
  return false;
}

bool AllNative(const std::u32string& word, const ScriptRanges& native) {
  for (char32_t cp : word) {
    if (!InScript(cp, native)) return false;
  }
  return !word.empty();
}

class MockBackend : public Backend {
 public:
  MockBackend(std::unique_ptr<Backend> inner, MockParams params, int n_best)
      : inner_(std::move(inner)), params_(params), n_best_(n_best) {}

  HypothesisSet Infer(std::string_view record_id,
                      std::string_view spoken) override {
    HypothesisSet inner_set = inner_->Infer(record_id, spoken);
    if (params_.p_corrupt_best <= 0.0) return inner_set;  // identity wrapper

    SplitMix64 rng(params_.seed ^ Fnv1a64(std::string(spoken)));
    const std::string clean = inner_set.hypotheses.front().text;
    std::string best = clean;
    if (rng.Bernoulli(params_.p_corrupt_best)) {
      best = Corrupt(clean, inner_set.spoken, rng);
    }

    HypothesisSet out;
    out.record_id = inner_set.record_id;
    out.spoken = inner_set.spoken;
    out.hypotheses.push_back({std::move(best), 0.0});
    for (int k = 0; k < params_.ensure_correct_lower; ++k) {
      out.hypotheses.push_back(
          {clean, -static_cast<double>(out.hypotheses.size())});
    }
    for (size_t k = 1; k < inner_set.hypotheses.size(); ++k) {
      if (static_cast<int>(out.hypotheses.size()) >= n_best_) break;
      out.hypotheses.push_back(
          {inner_set.hypotheses[k].text,
           -static_cast<double>(out.hypotheses.size())});
    }
    return out;
  }

 private:
  std::string Corrupt(const std::string& clean, const std::string& spoken,
                      SplitMix64& rng) {
    const double w_total = params_.w_drop_conversion + params_.w_delete_word +
                           params_.w_repeat_word + params_.w_space_noise;
    if (w_total <= 0.0) return spoken;
    double draw = rng.NextDouble() * w_total;
    if ((draw -= params_.w_drop_conversion) < 0) return spoken;
    if ((draw -= params_.w_delete_word) < 0) return DeleteWord(clean, rng);
    if ((draw -= params_.w_repeat_word) < 0) return RepeatWord(clean, rng);
    return SpaceNoise(clean, rng);
  }

  std::string DeleteWord(const std::string& text, SplitMix64& rng) {
    std::u32string cps = DecodeUtf8(text);
    std::vector<std::u32string> words = Split(cps);
    std::vector<size_t> candidates;
    for (size_t i = 0; i < words.size(); ++i) {
      if (!AllNative(words[i], HangulScript())) continue;
      if (params_.avoid_digit_adjacent_deletion) {
        if (i > 0 && ContainsAsciiDigit(words[i - 1])) continue;
        if (i + 1 < words.size() && ContainsAsciiDigit(words[i + 1])) continue;
      }
      candidates.push_back(i);
    }
    if (candidates.empty() || words.size() < 2) return text;
    size_t victim = candidates[rng.Uniform(candidates.size())];
    words.erase(words.begin() + victim);
    return Join(words);
  }

  std::string RepeatWord(const std::string& text, SplitMix64& rng) {
    std::vector<std::u32string> words = Split(DecodeUtf8(text));
    if (words.empty()) return text;
    size_t victim = rng.Uniform(words.size());
    words.insert(words.begin() + victim, words[victim]);
    return Join(words);
  }

  std::string SpaceNoise(const std::string& text, SplitMix64& rng) {
    std::u32string cps = DecodeUtf8(text);
    // Editable sites: existing spaces (deletable) and boundaries between two
    // non-space characters (insertable).
    std::vector<std::pair<size_t, bool>> sites;  // (index, is_deletion)
    for (size_t i = 0; i < cps.size(); ++i) {
      if (cps[i] == U' ') sites.push_back({i, true});
      if (i + 1 < cps.size() && cps[i] != U' ' && cps[i + 1] != U' ')
        sites.push_back({i + 1, false});
    }
    if (sites.empty()) return text;
    auto [index, is_deletion] = sites[rng.Uniform(sites.size())];
    if (is_deletion) {
      cps.erase(cps.begin() + index);
    } else {
      cps.insert(cps.begin() + index, U' ');
    }
    return EncodeUtf8(cps);
  }

  static std::vector<std::u32string> Split(const std::u32string& text) {
    std::vector<std::u32string> words;
    size_t i = 0;
    while (i < text.size()) {
      if (IsUnicodeSpace(text[i])) {
        ++i;
        continue;
      }
      size_t begin = i;
      while (i < text.size() && !IsUnicodeSpace(text[i])) ++i;
      words.push_back(text.substr(begin, i - begin));
    }
    return words;
  }

  static std::string Join(const std::vector<std::u32string>& words) {
    std::u32string out;
    for (size_t i = 0; i < words.size(); ++i) {
      if (i > 0) out += U' ';
      out += words[i];
    }
    return EncodeUtf8(out);
  }

  std::unique_ptr<Backend> inner_;
  MockParams params_;
  int n_best_;
};

class ExternalBackend : public Backend {
 public:
  ExternalBackend(std::string command, int n_best)
      : command_(std::move(command)), n_best_(n_best) {}

  HypothesisSet Infer(std::string_view record_id,
                      std::string_view spoken) override {
    auto sets = InferBatch({std::string(record_id)}, {std::string(spoken)});
    return std::move(sets.front());
  }

  std::vector<HypothesisSet> InferBatch(
      const std::vector<std::string>& record_ids,
      const std::vector<std::string>& spoken_texts) override {
    namespace fs = std::filesystem;
    static std::atomic<uint64_t> counter{0};
    const std::string tag = std::to_string(::getpid()) + "." +
                            std::to_string(counter.fetch_add(1));
    fs::path in_path = fs::temp_directory_path() / ("itn_ext_in." + tag);
    fs::path out_path = fs::temp_directory_path() / ("itn_ext_out." + tag);
    struct Cleanup {
      fs::path a, b;
      ~Cleanup() {
        std::error_code ec;
        fs::remove(a, ec);
        fs::remove(b, ec);
      }
    } cleanup{in_path, out_path};

    {
      std::ofstream in(in_path);
      for (const auto& spoken : spoken_texts)
        in << NfcNormalizeUtf8(spoken) << '\n';
      if (!in) throw BackendError("external backend: cannot write input file");
    }
    std::string cmd = command_ + " < '" + in_path.string() + "' > '" +
                      out_path.string() + "'";
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
      throw BackendError("external backend command failed with status " +
                         std::to_string(rc));
    }

    std::ifstream out(out_path);
    std::vector<HypothesisSet> sets;
    std::string line;
    size_t line_number = 0;
    while (std::getline(out, line)) {
      ++line_number;
      if (line.empty()) continue;
      HypothesisSet set;
      try {
        set = HypothesisSetFromJsonLine(line, line_number);
      } catch (const CorpusError& e) {
        throw BackendError(std::string("external backend output: ") +
                           e.what());
      }
      if (sets.size() < record_ids.size()) {
        // The wire contract is order-based; ids and spoken are ours.
        set.record_id = record_ids[sets.size()];
        set.spoken = NfcNormalizeUtf8(spoken_texts[sets.size()]);
      }
      if (static_cast<int>(set.hypotheses.size()) > n_best_)
        set.hypotheses.resize(n_best_);
      sets.push_back(std::move(set));
    }
    if (sets.size() != record_ids.size()) {
      throw BackendError("external backend returned " +
                         std::to_string(sets.size()) + " lines for " +
                         std::to_string(record_ids.size()) + " inputs");
    }
    return sets;
  }

 private:
  std::string command_;
  int n_best_;
};

}  // namespace

std::unique_ptr<Backend> MakeBackend(const BackendSpec& spec) {
  if (spec.n_best < 1) throw BackendError("n_best must be >= 1");
  switch (spec.kind) {
    case BackendKind::kRuleBased:
      return std::make_unique<RuleBasedBackend>(
          VerbalizationGrammar::Resolve(spec.grammar), spec.n_best);
    case BackendKind::kMock: {
      auto inner = std::make_unique<RuleBasedBackend>(
          VerbalizationGrammar::Resolve(spec.grammar), spec.n_best);
      return std::make_unique<MockBackend>(std::move(inner), spec.mock,
                                           spec.n_best);
    }
    case BackendKind::kExternal:
      if (spec.external_command.empty())
        throw BackendError("external backend requires a command");
      return std::make_unique<ExternalBackend>(spec.external_command,
                                               spec.n_best);
  }
  throw BackendError("unknown backend kind");
}

}  // namespace itn
