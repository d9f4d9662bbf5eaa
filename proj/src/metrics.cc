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

#include "itn/metrics.h"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "itn/unicode.h"

namespace itn {

double Cer(std::string_view hypothesis, std::string_view reference) {
  const std::u32string hyp = NfcNormalize(DecodeUtf8(hypothesis));
  const std::u32string ref = NfcNormalize(DecodeUtf8(reference));
  const size_t distance = LevenshteinDistance(hyp, ref);
  if (ref.empty()) {
    // Empty reference: zero against an empty hypothesis, otherwise the
    // insertions/1 convention.
    return hyp.empty() ? 0.0 : static_cast<double>(distance);
  }
  return static_cast<double>(distance) / static_cast<double>(ref.size());
}

RegionDecomposition RegionDecompose(std::string_view reference_spoken,
                                    std::string_view reference_written) {
  const std::u32string spoken = NfcNormalize(DecodeUtf8(reference_spoken));
  const std::u32string written = NfcNormalize(DecodeUtf8(reference_written));
  AlignmentPath path = Align(spoken, written);
  std::vector<NormalizationPair> pairs = ExtractPairs(path, Blacklist());

  RegionDecomposition decomposition;
  size_t cursor = 0;
  for (const auto& pair : pairs) {
    if (pair.w_range.size() == 0) continue;  // deletion pairs occupy no text
    if (pair.w_range.begin > cursor) {
      decomposition.non_itn_ranges.push_back({cursor, pair.w_range.begin});
    }
    decomposition.itn_ranges.push_back(pair.w_range);
    cursor = pair.w_range.end;
  }
  if (cursor < written.size()) {
    decomposition.non_itn_ranges.push_back({cursor, written.size()});
  }
  return decomposition;
}

namespace {

enum class Region { kItn, kNonItn };

Region RegionAt(const RegionDecomposition& decomposition, size_t index) {
  for (const auto& range : decomposition.itn_ranges) {
    if (index >= range.begin && index < range.end) return Region::kItn;
  }
  return Region::kNonItn;
}

RecordEval EvaluateRecord(const std::string& id, std::u32string hyp,
                          std::u32string ref_spoken, std::u32string ref,
                          bool ignore_space) {
  if (ignore_space) {
    hyp = StripWhitespace(hyp);
    ref_spoken = StripWhitespace(ref_spoken);
    ref = StripWhitespace(ref);
  }

  RecordEval eval;
  eval.id = id;

  RegionDecomposition decomposition =
      RegionDecompose(EncodeUtf8(ref_spoken), EncodeUtf8(ref));
  for (const auto& range : decomposition.itn_ranges)
    eval.itn_ref_len += range.size();
  eval.non_itn_ref_len = ref.size() - eval.itn_ref_len;
  if (ref.empty()) eval.empty_reference_flagged = true;

  AlignmentPath path = Align(hyp, ref);
  size_t consumed_ref = 0;
  for (const auto& step : path.steps) {
    switch (step.kind) {
      case StepKind::kMatch:
        ++consumed_ref;
        continue;
      case StepKind::kSubstitute:
      case StepKind::kDelete: {
        // The error owns a reference position.
        Region region = RegionAt(decomposition, *step.target_index);
        (region == Region::kItn ? eval.itn_errors : eval.non_itn_errors)++;
        if (step.kind == StepKind::kSubstitute) {
          ++eval.counts.substitutions;
        } else {
          ++eval.counts.deletions;
        }
        ++consumed_ref;
        break;
      }
      case StepKind::kInsert: {
        ++eval.counts.insertions;
        if (ref.empty()) {
          ++eval.non_itn_errors;
          break;
        }
        // Preceding reference character; leading insertions go to the first
        // region. Insertions exactly between two different regions are
        // boundary-ambiguous and bucketed separately.
        size_t preceding = consumed_ref == 0 ? 0 : consumed_ref - 1;
        Region region = RegionAt(decomposition, preceding);
        if (consumed_ref > 0 && consumed_ref < ref.size()) {
          Region following = RegionAt(decomposition, consumed_ref);
          if (following != region) {
            ++eval.boundary_errors;
            break;
          }
        }
        (region == Region::kItn ? eval.itn_errors : eval.non_itn_errors)++;
        break;
      }
    }
  }
  return eval;
}

}  // namespace

nlohmann::ordered_json EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["cer"] = cer;
  j["i_cer"] = i_cer;
  j["ni_cer"] = ni_cer;
  j["counts"] = {{"substitutions", counts.substitutions},
                 {"insertions", counts.insertions},
                 {"deletions", counts.deletions}};
  j["boundary_errors"] = boundary_errors;
  j["flagged_empty_references"] = flagged_empty_references;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : per_record) {
    records.push_back({{"id", r.id},
                       {"itn_ref_len", r.itn_ref_len},
                       {"non_itn_ref_len", r.non_itn_ref_len},
                       {"itn_errors", r.itn_errors},
                       {"non_itn_errors", r.non_itn_errors},
                       {"boundary_errors", r.boundary_errors},
                       {"substitutions", r.counts.substitutions},
                       {"insertions", r.counts.insertions},
                       {"deletions", r.counts.deletions}});
  }
  j["per_record"] = records;
  return j;
}

EvalReport Evaluate(const std::vector<CorpusRecord>& hypotheses,
                    const std::vector<CorpusRecord>& references,
                    EvalOptions options) {
  std::unordered_map<std::string, const CorpusRecord*> by_id;
  for (const auto& hyp : hypotheses) {
    if (!by_id.emplace(hyp.id, &hyp).second) {
      throw std::invalid_argument("evaluate: duplicate hypothesis id " +
                                  hyp.id);
    }
  }
  if (hypotheses.size() != references.size()) {
    throw std::invalid_argument("evaluate: corpora differ in size");
  }

  struct Job {
    const CorpusRecord* hyp;
    const CorpusRecord* ref;
  };
  std::vector<Job> jobs;
  jobs.reserve(references.size());
  for (const auto& ref : references) {
    auto it = by_id.find(ref.id);
    if (it == by_id.end()) {
      throw std::invalid_argument("evaluate: no hypothesis for id " + ref.id);
    }
    if (!ref.spoken || !ref.written) {
      throw std::invalid_argument("evaluate: reference " + ref.id +
                                  " must have spoken and written");
    }
    if (!it->second->written) {
      throw std::invalid_argument("evaluate: hypothesis " + ref.id +
                                  " has no written side");
    }
    jobs.push_back({it->second, &ref});
  }

  std::vector<RecordEval> evals(jobs.size());
  const int workers = std::max(1, std::min<int>(options.jobs, jobs.size()));
  if (workers <= 1) {
    for (size_t k = 0; k < jobs.size(); ++k) {
      evals[k] = EvaluateRecord(jobs[k].ref->id,
                                NfcNormalize(DecodeUtf8(*jobs[k].hyp->written)),
                                NfcNormalize(DecodeUtf8(*jobs[k].ref->spoken)),
                                NfcNormalize(DecodeUtf8(*jobs[k].ref->written)),
                                options.ignore_space);
    }
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (size_t k = next.fetch_add(1); k < jobs.size();
             k = next.fetch_add(1)) {
          evals[k] =
              EvaluateRecord(jobs[k].ref->id,
                             NfcNormalize(DecodeUtf8(*jobs[k].hyp->written)),
                             NfcNormalize(DecodeUtf8(*jobs[k].ref->spoken)),
                             NfcNormalize(DecodeUtf8(*jobs[k].ref->written)),
                             options.ignore_space);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  EvalReport report;
  size_t total_errors = 0;
  size_t total_ref_len = 0;
  size_t itn_errors = 0;
  size_t itn_len = 0;
  size_t non_itn_errors = 0;
  size_t non_itn_len = 0;
  for (auto& eval : evals) {
    total_errors += eval.counts.total();
    // The insertions/1 convention keeps empty references in the corpus CER.
    total_ref_len += std::max<size_t>(
        eval.itn_ref_len + eval.non_itn_ref_len, eval.empty_reference_flagged);
    itn_errors += eval.itn_errors;
    itn_len += eval.itn_ref_len;
    non_itn_errors += eval.non_itn_errors;
    non_itn_len += eval.non_itn_ref_len;
    report.boundary_errors += eval.boundary_errors;
    report.flagged_empty_references += eval.empty_reference_flagged ? 1 : 0;
    report.counts.substitutions += eval.counts.substitutions;
    report.counts.insertions += eval.counts.insertions;
    report.counts.deletions += eval.counts.deletions;
    report.per_record.push_back(std::move(eval));
  }
  auto ratio = [](size_t errors, size_t length) {
    if (length == 0) return errors == 0 ? 0.0 : static_cast<double>(errors);
    return static_cast<double>(errors) / static_cast<double>(length);
  };
  report.cer = ratio(total_errors, total_ref_len);
  report.i_cer = ratio(itn_errors, itn_len);
  report.ni_cer = ratio(non_itn_errors, non_itn_len);
  return report;
}

}  // namespace itn
