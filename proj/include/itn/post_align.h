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

#ifndef ITN_POST_ALIGN_H_
#define ITN_POST_ALIGN_H_

#include <string>
#include <utility>
#include <vector>

#include "itn/alignment.h"
#include "itn/corpus.h"
#include "itn/unicode.h"

namespace itn {

// Candidate rejection rules applied after voting. The deletion rule restores
// text that the backend erroneously deleted; further error types can be
// handled by adding rules here.
enum class RejectionRuleKind { kNativeDeletion };

struct PaConfig {
  // Hypotheses are dropped when 1-best score minus their score exceeds alpha.
  double alpha = 5.0;
  // A pair class from the non-best hypotheses needs count > eta to become a
  // candidate.
  int eta = 1;
  Blacklist blacklist = Blacklist::SpaceOnly();
  ScriptRanges native_script_ranges = HangulScript();
  std::vector<RejectionRuleKind> rejection_rules = {
      RejectionRuleKind::kNativeDeletion};

  // Operating point with default thresholds and the full scheme.
  static PaConfig Proposed();
  // Plain alignment substitution: no blacklist, deletion normalizations
  // allowed through.
  static PaConfig Baseline();
};

enum class CandidateOrigin { kFromBest, kFromVote };
enum class RejectReason { kDeletionNormalization, kOverlap, kBelowEta };

std::string ToString(CandidateOrigin origin);
std::string ToString(RejectReason reason);

struct PaCandidate {
  NormalizationPair pair;
  CandidateOrigin origin = CandidateOrigin::kFromBest;
  // Occurrence count among the non-best hypotheses (vote-derived only).
  int vote_count = 0;
};

struct PaRejection {
  NormalizationPair pair;
  RejectReason reason = RejectReason::kBelowEta;
  int vote_count = 0;
};

// Explainability record of one post-aligning run.
struct PaTrace {
  size_t kept_hypothesis_count = 0;
  std::vector<std::vector<NormalizationPair>> pair_sets;
  std::vector<PaCandidate> candidates;
  std::vector<PaRejection> rejected;
  // Final accepted pairs in source order; exactly what was substituted.
  std::vector<PaCandidate> applied;
};

// Keeps hypotheses whose score gap from the 1-best is <= alpha. The 1-best
// is always kept and relative order is preserved.
HypothesisSet FilterNbest(const HypothesisSet& hyps, double alpha);

struct VoteResult {
  std::vector<PaCandidate> candidates;
  std::vector<PaRejection> rejected;
};

// Candidate selection over per-hypothesis pair sets. All pairs of
// pair_sets[0] are included. Pair classes from the remaining sets are counted
// with whitespace-insensitive identity and included when count > eta,
// represented by their most frequent literal form (ties resolved toward the
// highest-ranked hypothesis). Vote-derived pairs overlapping an accepted pair
// are rejected with reason kOverlap; D_0 takes precedence.
VoteResult VoteCandidates(
    const std::vector<std::vector<NormalizationPair>>& pair_sets, int eta);

// Removes candidates whose w is empty (after whitespace stripping) and whose
// s consists solely of native-script characters and whitespace.
std::pair<std::vector<PaCandidate>, std::vector<PaRejection>> RejectDeletions(
    std::vector<PaCandidate> candidates, const PaConfig& cfg);

struct PaResult {
  std::string written;
  PaTrace trace;
};

// Full post-aligning pipeline: alpha filter, per-hypothesis alignment and
// pair extraction, eta voting, rejection rules, substitution into the spoken
// text. Text outside applied ranges is byte-identical to the spoken input.
PaResult PostAlign(const HypothesisSet& hyps, const PaConfig& cfg);

}  // namespace itn

#endif  // ITN_POST_ALIGN_H_
