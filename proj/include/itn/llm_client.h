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

#ifndef ITN_LLM_CLIENT_H_
#define ITN_LLM_CLIENT_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itn {

enum class YesNo { kYes, kNo, kInvalid };

std::string ToString(YesNo v);

// First token of the response, stripped of punctuation and quotes, must be a
// case-insensitive "yes" or "no"; anything else is kInvalid.
YesNo ParseYesNo(std::string_view response);

struct PromptTemplate {
  std::string id;
  // Must contain each placeholder exactly once.
  std::string text;

  static constexpr const char* kSpokenPlaceholder = "{spoken text}";
  static constexpr const char* kPseudoWrittenPlaceholder =
      "{pseudo-written text}";

  // P1: which sentence form reads more naturally (news-quote framing).
  static PromptTemplate Naturalness();
  // P2: is the numeric conversion correct.
  static PromptTemplate Correctness();

  bool Valid() const;
  std::string Render(std::string_view spoken,
                     std::string_view pseudo_written) const;
};

struct ConfidenceVerdict {
  std::string record_id;
  YesNo prompt1_answer = YesNo::kInvalid;
  YesNo prompt2_answer = YesNo::kInvalid;
  // Always prompt1_answer == Yes && prompt2_answer == Yes.
  bool accepted = false;
  bool transport_error = false;
  std::vector<std::string> raw_responses;
};

class Provider {
 public:
  struct Reply {
    bool ok = false;
    std::string text;
    bool retryable = false;
    // Provider-advised delay (e.g. Retry-After), seconds; <0 when absent.
    double retry_after_s = -1.0;
  };

  virtual ~Provider() = default;
  virtual std::string id() const = 0;
  virtual Reply Complete(const std::string& prompt) = 0;
};

// Offline provider for tests and dry runs. Modes: constant answers, a
// fixture mapping (spoken, pseudo-written) -> (answer1, answer2), or a
// scripted failure sequence for retry tests.
class StubProvider : public Provider {
 public:
  static std::unique_ptr<StubProvider> Constant(std::string answer1,
                                                std::string answer2);
  // Fixture file: JSON lines {"spoken":..., "pseudo_written":...,
  // "answers":["yes"|"no", "yes"|"no"]}. Unlisted pairs answer (yes, yes).
  static std::unique_ptr<StubProvider> FromFixtureFile(
      const std::string& path);
  static std::unique_ptr<StubProvider> FromFixtureString(
      const std::string& jsonl);

  // Next fail_times calls return retryable failures, then answers proceed.
  void FailTimes(int fail_times) { fail_times_ = fail_times; }

  std::string id() const override { return "stub:" + fingerprint_; }
  Reply Complete(const std::string& prompt) override;

  int calls() const { return calls_; }

 private:
  StubProvider() = default;

  std::string fingerprint_;
  std::string answer1_ = "yes";
  std::string answer2_ = "yes";
  // Keyed by pseudo-written text extracted from the rendered prompt; the
  // fixture match is substring-based since prompts embed both texts.
  std::vector<std::pair<std::pair<std::string, std::string>,
                        std::pair<std::string, std::string>>>
      fixtures_;
  int fail_times_ = 0;
  int calls_ = 0;
  // Alternates P1/P2 per (spoken, pseudo) key; prompts arrive in order.
  std::map<std::string, int> prompt_counts_;
};

struct RetryConfig {
  int max_retries = 3;
  double initial_backoff_s = 0.2;
  double backoff_multiplier = 2.0;
  double max_total_s = 30.0;
};

struct ProviderConfig {
  std::string endpoint = "http://localhost:8080";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-3.5-turbo";
  // Read from the ITN_LLM_API_KEY environment variable when empty.
  std::string api_key;
  double temperature = 0.0;
  double timeout_s = 30.0;
};

// Chat-completion JSON adapter over HTTP. Sends one user message per prompt
// and reads choices[0].message.content.
std::unique_ptr<Provider> MakeHttpProvider(const ProviderConfig& config);

// Dual-prompt confidence scoring with retries and an in-memory verdict
// cache keyed by (spoken, pseudo-written, template ids, provider id).
class ConfidenceScorer {
 public:
  ConfidenceScorer(Provider* provider,
                   PromptTemplate prompt1 = PromptTemplate::Naturalness(),
                   PromptTemplate prompt2 = PromptTemplate::Correctness(),
                   RetryConfig retry = {});

  ConfidenceVerdict Score(std::string_view record_id, std::string_view spoken,
                          std::string_view pseudo_written);

  // Bounded concurrent scoring; results are in input order.
  std::vector<ConfidenceVerdict> ScoreBatch(
      const std::vector<std::array<std::string, 3>>& id_spoken_pseudo,
      int max_in_flight = 4);

  size_t cache_hits() const { return cache_hits_; }
  size_t cache_size() const { return cache_.size(); }

 private:
  YesNo Query(const std::string& prompt, std::string* raw,
              bool* transport_error);

  Provider* provider_;
  PromptTemplate prompt1_;
  PromptTemplate prompt2_;
  RetryConfig retry_;
  std::mutex mutex_;
  std::map<std::string, ConfidenceVerdict> cache_;
  size_t cache_hits_ = 0;
};

}  // namespace itn

#endif  // ITN_LLM_CLIENT_H_
