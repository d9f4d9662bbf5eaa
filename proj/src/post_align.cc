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

#include "itn/post_align.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace itn {

PaConfig PaConfig::Proposed() { return PaConfig{}; }

PaConfig PaConfig::Baseline() {
  PaConfig cfg;
  cfg.blacklist = Blacklist();
  cfg.rejection_rules.clear();
  return cfg;
}

std::string ToString(CandidateOrigin origin) {
  return origin == CandidateOrigin::kFromBest ? "from-best" : "from-vote";
}

std::string ToString(RejectReason reason) {
  switch (reason) {
    case RejectReason::kDeletionNormalization:
      return "deletion-normalization";
    case RejectReason::kOverlap:
      return "overlap";
    case RejectReason::kBelowEta:
      return "below-eta";
  }
  return "below-eta";
}

HypothesisSet FilterNbest(const HypothesisSet& hyps, double alpha) {
  if (hyps.hypotheses.empty()) {
    throw std::invalid_argument("filter_nbest: empty hypothesis list");
  }
  HypothesisSet kept;
  kept.record_id = hyps.record_id;
  kept.spoken = hyps.spoken;
  const double best = hyps.hypotheses.front().score;
  for (const auto& h : hyps.hypotheses) {
    // Dropped only when the gap strictly exceeds alpha; the 1-best always
    // has gap zero.
    if (best - h.score <= alpha) kept.hypotheses.push_back(h);
  }
  return kept;
}

namespace {

// Whitespace-insensitive pair identity for counting.
std::string ClassKey(const NormalizationPair& pair) {
  return EncodeUtf8(StripWhitespace(pair.s)) + '\x1f' +
         EncodeUtf8(StripWhitespace(pair.w));
}

struct Occurrence {
  size_t hypothesis = 0;  // index into pair_sets (1-based sets only)
  NormalizationPair pair;
};

}  // namespace

VoteResult VoteCandidates(
    const std::vector<std::vector<NormalizationPair>>& pair_sets, int eta) {
  VoteResult result;
  if (pair_sets.empty()) return result;

  // All of D_0 is included.
  for (const auto& pair : pair_sets[0]) {
    result.candidates.push_back({pair, CandidateOrigin::kFromBest, 0});
  }

  // Count pair classes across D_1..D_M, whitespace-insensitive.
  std::map<std::string, std::vector<Occurrence>> classes;
  for (size_t m = 1; m < pair_sets.size(); ++m) {
    for (const auto& pair : pair_sets[m]) {
      classes[ClassKey(pair)].push_back({m, pair});
    }
  }

  struct VoteEntry {
    NormalizationPair representative;
    int class_count = 0;
    std::string key;
  };
  std::vector<VoteEntry> passing;
  std::vector<VoteEntry> failing;
  for (auto& [key, occurrences] : classes) {
    const int count = static_cast<int>(occurrences.size());
    // The same class may occur at several spoken positions; each position is
    // its own candidate. Positions are clusters of overlapping s_ranges.
    std::sort(occurrences.begin(), occurrences.end(),
              [](const Occurrence& a, const Occurrence& b) {
                if (a.pair.s_range.begin != b.pair.s_range.begin)
                  return a.pair.s_range.begin < b.pair.s_range.begin;
                if (a.pair.s_range.end != b.pair.s_range.end)
                  return a.pair.s_range.end < b.pair.s_range.end;
                return a.hypothesis < b.hypothesis;
              });
    size_t start = 0;
    while (start < occurrences.size()) {
      size_t end = start + 1;
      CpRange span = occurrences[start].pair.s_range;
      while (end < occurrences.size() &&
             occurrences[end].pair.s_range.begin < span.end) {
        span.end = std::max(span.end, occurrences[end].pair.s_range.end);
        ++end;
      }
      // Most frequent literal form in the cluster; ties go to the form from
      // the highest-ranked hypothesis.
      struct FormStat {
        int count = 0;
        size_t min_hypothesis = SIZE_MAX;
        NormalizationPair pair;
      };
      std::map<std::string, FormStat> forms;
      for (size_t k = start; k < end; ++k) {
        const auto& occ = occurrences[k];
        std::string form_key =
            EncodeUtf8(occ.pair.s) + '\x1f' + EncodeUtf8(occ.pair.w);
        auto& stat = forms[form_key];
        ++stat.count;
        if (occ.hypothesis < stat.min_hypothesis) {
          stat.min_hypothesis = occ.hypothesis;
          stat.pair = occ.pair;
        }
      }
      const FormStat* best = nullptr;
      for (const auto& [form_key, stat] : forms) {
        if (!best || stat.count > best->count ||
            (stat.count == best->count &&
             stat.min_hypothesis < best->min_hypothesis)) {
          best = &stat;
        }
      }
      VoteEntry entry{best->pair, count, key};
      (count > eta ? passing : failing).push_back(std::move(entry));
      start = end;
    }
  }

  // Overlap resolution order: descending count, then leftmost-first. D_0 was
  // accepted above and takes precedence.
  std::sort(passing.begin(), passing.end(),
            [](const VoteEntry& a, const VoteEntry& b) {
              if (a.class_count != b.class_count)
                return a.class_count > b.class_count;
              if (a.representative.s_range.begin !=
                  b.representative.s_range.begin)
                return a.representative.s_range.begin <
                       b.representative.s_range.begin;
              return a.key < b.key;
            });
  for (auto& entry : passing) {
    bool overlaps = false;
    for (const auto& accepted : result.candidates) {
      if (entry.representative.s_range.Overlaps(accepted.pair.s_range)) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) {
      result.rejected.push_back({std::move(entry.representative),
                                 RejectReason::kOverlap, entry.class_count});
    } else {
      result.candidates.push_back({std::move(entry.representative),
                                   CandidateOrigin::kFromVote,
                                   entry.class_count});
    }
  }
  for (auto& entry : failing) {
    result.rejected.push_back({std::move(entry.representative),
                               RejectReason::kBelowEta, entry.class_count});
  }
  return result;
}

namespace {

bool IsNativeDeletion(const NormalizationPair& pair, const PaConfig& cfg) {
  if (!StripWhitespace(pair.w).empty()) return false;
  if (StripWhitespace(pair.s).empty()) return !pair.s.empty();
  for (char32_t cp : pair.s) {
    if (!IsUnicodeSpace(cp) && !InScript(cp, cfg.native_script_ranges)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::pair<std::vector<PaCandidate>, std::vector<PaRejection>> RejectDeletions(
    std::vector<PaCandidate> candidates, const PaConfig& cfg) {
  std::vector<PaCandidate> kept;
  std::vector<PaRejection> rejected;
  for (auto& candidate : candidates) {
    if (IsNativeDeletion(candidate.pair, cfg)) {
      rejected.push_back({std::move(candidate.pair),
                          RejectReason::kDeletionNormalization,
                          candidate.vote_count});
    } else {
      kept.push_back(std::move(candidate));
    }
  }
  return {std::move(kept), std::move(rejected)};
}

PaResult PostAlign(const HypothesisSet& hyps, const PaConfig& cfg) {
  HypothesisSet kept = FilterNbest(hyps, cfg.alpha);

  PaResult result;
  PaTrace& trace = result.trace;
  trace.kept_hypothesis_count = kept.hypotheses.size();

  const std::u32string spoken = NfcNormalize(DecodeUtf8(kept.spoken));
  trace.pair_sets.reserve(kept.hypotheses.size());
  for (const auto& hypothesis : kept.hypotheses) {
    AlignmentPath path =
        Align(spoken, NfcNormalize(DecodeUtf8(hypothesis.text)));
    trace.pair_sets.push_back(ExtractPairs(path, cfg.blacklist));
  }

  VoteResult vote = VoteCandidates(trace.pair_sets, cfg.eta);
  trace.candidates = vote.candidates;
  trace.rejected = std::move(vote.rejected);

  std::vector<PaCandidate> accepted = std::move(vote.candidates);
  for (RejectionRuleKind rule : cfg.rejection_rules) {
    if (rule == RejectionRuleKind::kNativeDeletion) {
      auto [still_accepted, rejections] = RejectDeletions(std::move(accepted),
                                                          cfg);
      accepted = std::move(still_accepted);
      trace.rejected.insert(trace.rejected.end(),
                            std::make_move_iterator(rejections.begin()),
                            std::make_move_iterator(rejections.end()));
    }
  }

  std::sort(accepted.begin(), accepted.end(),
            [](const PaCandidate& a, const PaCandidate& b) {
              return a.pair.s_range.begin < b.pair.s_range.begin;
            });
  std::vector<NormalizationPair> pairs;
  pairs.reserve(accepted.size());
  for (const auto& candidate : accepted) pairs.push_back(candidate.pair);

  result.written = EncodeUtf8(ApplyPairs(spoken, pairs));
  trace.applied = std::move(accepted);
  return result;
}

}  // namespace itn
