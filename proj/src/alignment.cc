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

#include "itn/alignment.h"

#include <algorithm>
#include <stdexcept>

#include "itn/unicode.h"

namespace itn {

std::string NormalizationPair::SUtf8() const { return EncodeUtf8(s); }
std::string NormalizationPair::WUtf8() const { return EncodeUtf8(w); }

Blacklist::Blacklist(std::u32string_view chars) {
  std::u32string nfc = NfcNormalize(std::u32string(chars));
  chars_.insert(nfc.begin(), nfc.end());
}

Blacklist Blacklist::SpaceOnly() { return Blacklist(U" "); }

std::u32string Blacklist::Chars() const {
  std::u32string out(chars_.begin(), chars_.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Suffix-distance table: dp[i][j] = distance(source[i..n), target[j..m)).
// Lets the path be built forward from (0,0) with greedy tie-breaking.
std::vector<int> SuffixDistances(std::u32string_view source,
                                 std::u32string_view target) {
  const size_t n = source.size();
  const size_t m = target.size();
  std::vector<int> dp((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> int& { return dp[i * (m + 1) + j]; };
  for (size_t j = 0; j <= m; ++j) at(n, j) = static_cast<int>(m - j);
  for (size_t i = n; i-- > 0;) {
    at(i, m) = static_cast<int>(n - i);
    for (size_t j = m; j-- > 0;) {
      int diag = at(i + 1, j + 1) + (source[i] == target[j] ? 0 : 1);
      int del = at(i, j + 1) + 1;
      int ins = at(i + 1, j) + 1;
      at(i, j) = std::min(diag, std::min(del, ins));
    }
  }
  return dp;
}

}  // namespace

size_t LevenshteinDistance(std::u32string_view a, std::u32string_view b) {
  // Two-row iterative form; used standalone by the metrics module.
  const size_t n = a.size();
  const size_t m = b.size();
  std::vector<size_t> prev(m + 1);
  std::vector<size_t> cur(m + 1);
  for (size_t j = 0; j <= m; ++j) prev[j] = j;
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= m; ++j) {
      size_t diag = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min(diag, std::min(prev[j], cur[j - 1]) + 1);
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

AlignmentPath Align(std::u32string_view source, std::u32string_view target) {
  AlignmentPath path;
  path.source.assign(source.begin(), source.end());
  path.target.assign(target.begin(), target.end());

  const size_t n = source.size();
  const size_t m = target.size();
  std::vector<int> dp = SuffixDistances(source, target);
  auto at = [&](size_t i, size_t j) -> int {
    return dp[i * (m + 1) + j];
  };

  path.steps.reserve(n + m);
  size_t i = 0;
  size_t j = 0;
  size_t cost = 0;
  while (i < n || j < m) {
    AlignmentStep step;
    const int here = at(i, j);
    if (i < n && j < m && source[i] == target[j] && here == at(i + 1, j + 1)) {
      step.kind = StepKind::kMatch;
      step.source_index = i;
      step.target_index = j;
      ++i;
      ++j;
    } else if (i < n && j < m && here == at(i + 1, j + 1) + 1) {
      step.kind = StepKind::kSubstitute;
      step.source_index = i;
      step.target_index = j;
      ++cost;
      ++i;
      ++j;
    } else if (j < m && here == at(i, j + 1) + 1) {
      step.kind = StepKind::kDelete;
      step.target_index = j;
      ++cost;
      ++j;
    } else {
      step.kind = StepKind::kInsert;
      step.source_index = i;
      ++cost;
      ++i;
    }
    step.cumulative_cost = cost;
    path.steps.push_back(step);
  }
  return path;
}

AlignmentPath AlignUtf8(std::string_view source, std::string_view target) {
  return Align(NfcNormalize(DecodeUtf8(source)),
               NfcNormalize(DecodeUtf8(target)));
}

std::vector<NormalizationPair> ExtractPairs(const AlignmentPath& path,
                                            const Blacklist& blacklist) {
  std::vector<NormalizationPair> pairs;
  bool open = false;
  size_t s_start = 0;
  size_t w_start = 0;
  size_t i = 0;  // source codepoints consumed
  size_t j = 0;  // target codepoints consumed
  size_t prev_cost = 0;

  auto close_region = [&](size_t s_end, size_t w_end) {
    NormalizationPair pair;
    pair.s_range = {s_start, s_end};
    pair.w_range = {w_start, w_end};
    pair.s = path.source.substr(s_start, s_end - s_start);
    pair.w = path.target.substr(w_start, w_end - w_start);
    open = false;
    // Minimal-cost paths never produce s == w; guard anyway so the
    // invariant holds for hand-built paths too.
    if (pair.s != pair.w) pairs.push_back(std::move(pair));
  };

  for (const AlignmentStep& step : path.steps) {
    if (step.cumulative_cost > prev_cost) {
      if (!open) {
        open = true;
        s_start = i;
        w_start = j;
      }
    } else if (open && step.kind == StepKind::kMatch) {
      // Cost plateau. Blacklisted characters cannot terminate the region;
      // they are passed over and extend it.
      if (!blacklist.Contains(path.source[*step.source_index])) {
        close_region(i, j);
      }
    }
    prev_cost = step.cumulative_cost;
    switch (step.kind) {
      case StepKind::kMatch:
      case StepKind::kSubstitute:
        ++i;
        ++j;
        break;
      case StepKind::kInsert:
        ++i;
        break;
      case StepKind::kDelete:
        ++j;
        break;
    }
  }
  if (open) close_region(i, j);
  return pairs;
}

std::u32string ApplyPairs(std::u32string_view source,
                          std::span<const NormalizationPair> pairs) {
  size_t cursor = 0;
  std::u32string out;
  out.reserve(source.size());
  for (const auto& pair : pairs) {
    if (pair.s_range.begin < cursor || pair.s_range.end > source.size() ||
        pair.s_range.begin > pair.s_range.end) {
      throw std::invalid_argument(
          "apply_pairs: overlapping or out-of-bounds range");
    }
    out.append(source.substr(cursor, pair.s_range.begin - cursor));
    out.append(pair.w);
    cursor = pair.s_range.end;
  }
  out.append(source.substr(cursor));
  return out;
}

std::string ApplyPairsUtf8(std::string_view source,
                           std::span<const NormalizationPair> pairs) {
  return EncodeUtf8(ApplyPairs(NfcNormalize(DecodeUtf8(source)), pairs));
}

}  // namespace itn
