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

#include "itn/llm_client.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "itn/rng.h"

namespace itn {

std::string ToString(YesNo v) {
  switch (v) {
    case YesNo::kYes:
      return "yes";
    case YesNo::kNo:
      return "no";
    case YesNo::kInvalid:
      return "invalid";
  }
  return "invalid";
}

YesNo ParseYesNo(std::string_view response) {
  // First whitespace-delimited token, stripped of surrounding punctuation.
  size_t begin = response.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return YesNo::kInvalid;
  size_t end = response.find_first_of(" \t\r\n", begin);
  if (end == std::string_view::npos) end = response.size();
  std::string token(response.substr(begin, end - begin));
  auto is_junk = [](char c) {
    return !std::isalnum(static_cast<unsigned char>(c));
  };
  while (!token.empty() && is_junk(token.front())) token.erase(token.begin());
  while (!token.empty() && is_junk(token.back())) token.pop_back();
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (token == "yes") return YesNo::kYes;
  if (token == "no") return YesNo::kNo;
  return YesNo::kInvalid;
}

PromptTemplate PromptTemplate::Naturalness() {
  return {"naturalness-p1",
          "Which of the two sentences, {spoken text} or {pseudo-written text} "
          "when the numeric part of {spoken text} is converted to numbers, is "
          "more commonly used by people? Do you think people would find it "
          "easier to recognize if the altered sentence is quoted in a news "
          "article? Please respond with \"yes\" or \"no\" only."};
}

PromptTemplate PromptTemplate::Correctness() {
  return {"correctness-p2",
          "Tell me if {pseudo-written text} is the correct conversion for the "
          "numeric part pronounced in Korean in {spoken text}. Please respond "
          "with only \"yes\" or \"no\"."};
}

bool PromptTemplate::Valid() const {
  return text.find(kSpokenPlaceholder) != std::string::npos &&
         text.find(kPseudoWrittenPlaceholder) != std::string::npos;
}

namespace {

void ReplaceAll(std::string* text, std::string_view placeholder,
                std::string_view value) {
  size_t pos = 0;
  while ((pos = text->find(placeholder, pos)) != std::string::npos) {
    text->replace(pos, placeholder.size(), value);
    pos += value.size();
  }
}

}  // namespace

std::string PromptTemplate::Render(std::string_view spoken,
                                   std::string_view pseudo_written) const {
  std::string out = text;
  ReplaceAll(&out, kSpokenPlaceholder, spoken);
  ReplaceAll(&out, kPseudoWrittenPlaceholder, pseudo_written);
  return out;
}

std::unique_ptr<StubProvider> StubProvider::Constant(std::string answer1,
                                                     std::string answer2) {
  auto stub = std::unique_ptr<StubProvider>(new StubProvider());
  stub->answer1_ = std::move(answer1);
  stub->answer2_ = std::move(answer2);
  stub->fingerprint_ = "const:" + stub->answer1_ + ":" + stub->answer2_;
  return stub;
}

std::unique_ptr<StubProvider> StubProvider::FromFixtureString(
    const std::string& jsonl) {
  auto stub = std::unique_ptr<StubProvider>(new StubProvider());
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    stub->fixtures_.push_back(
        {{j.at("spoken").get<std::string>(),
          j.at("pseudo_written").get<std::string>()},
         {j.at("answers").at(0).get<std::string>(),
          j.at("answers").at(1).get<std::string>()}});
  }
  stub->fingerprint_ = "fixture:" + std::to_string(Fnv1a64(jsonl));
  return stub;
}

std::unique_ptr<StubProvider> StubProvider::FromFixtureFile(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stub fixture: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromFixtureString(buffer.str());
}

Provider::Reply StubProvider::Complete(const std::string& prompt) {
  ++calls_;
  if (fail_times_ > 0) {
    --fail_times_;
    return {.ok = false, .retryable = true};
  }
  // The correctness prompt carries its own marker phrase; fixture answers
  // are routed on it. Custom templates fall back to answer pair order.
  const bool is_p2 = prompt.find("correct conversion") != std::string::npos;
  for (const auto& [key, answers] : fixtures_) {
    if (prompt.find(key.first) != std::string::npos &&
        prompt.find(key.second) != std::string::npos) {
      return {.ok = true, .text = is_p2 ? answers.second : answers.first};
    }
  }
  return {.ok = true, .text = is_p2 ? answer2_ : answer1_};
}

namespace {

class HttpProvider : public Provider {
 public:
  explicit HttpProvider(ProviderConfig config) : config_(std::move(config)) {
    if (config_.api_key.empty()) {
      if (const char* env = std::getenv("ITN_LLM_API_KEY")) {
        config_.api_key = env;
      }
    }
  }

  std::string id() const override {
    return "http:" + config_.endpoint + config_.path + ":" + config_.model;
  }

  Reply Complete(const std::string& prompt) override {
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(std::chrono::milliseconds(
        static_cast<int>(config_.timeout_s * 1000)));
    client.set_read_timeout(
        std::chrono::milliseconds(static_cast<int>(config_.timeout_s * 1000)));
    nlohmann::json body = {
        {"model", config_.model},
        {"messages",
         {{{"role", "user"}, {"content", prompt}}}},
        {"temperature", config_.temperature}};
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }
    auto res = client.Post(config_.path, headers, body.dump(),
                           "application/json");
    Reply reply;
    if (!res) {
      reply.retryable = true;  // transport-level failure
      return reply;
    }
    if (res->status == 200) {
      try {
        auto j = nlohmann::json::parse(res->body);
        reply.text =
            j.at("choices").at(0).at("message").at("content").get<std::string>();
        reply.ok = true;
      } catch (const nlohmann::json::exception&) {
        reply.ok = false;  // malformed body; not retryable
      }
      return reply;
    }
    if (res->status == 429 || res->status >= 500) {
      reply.retryable = true;
      if (res->has_header("Retry-After")) {
        try {
          reply.retry_after_s = std::stod(res->get_header_value("Retry-After"));
        } catch (...) {
        }
      }
    }
    return reply;
  }

 private:
  ProviderConfig config_;
};

}  // namespace

std::unique_ptr<Provider> MakeHttpProvider(const ProviderConfig& config) {
  return std::make_unique<HttpProvider>(config);
}

ConfidenceScorer::ConfidenceScorer(Provider* provider, PromptTemplate prompt1,
                                   PromptTemplate prompt2, RetryConfig retry)
    : provider_(provider),
      prompt1_(std::move(prompt1)),
      prompt2_(std::move(prompt2)),
      retry_(retry) {
  if (!prompt1_.Valid() || !prompt2_.Valid()) {
    throw std::invalid_argument(
        "confidence scorer: templates must contain both placeholders");
  }
}

YesNo ConfidenceScorer::Query(const std::string& prompt, std::string* raw,
                              bool* transport_error) {
  using Clock = std::chrono::steady_clock;
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(retry_.max_total_s));
  double backoff = retry_.initial_backoff_s;
  for (int attempt = 0; attempt <= retry_.max_retries; ++attempt) {
    Provider::Reply reply = provider_->Complete(prompt);
    if (reply.ok) {
      *raw = reply.text;
      return ParseYesNo(reply.text);
    }
    if (!reply.retryable || attempt == retry_.max_retries) break;
    double delay = reply.retry_after_s >= 0 ? reply.retry_after_s : backoff;
    backoff *= retry_.backoff_multiplier;
    if (Clock::now() + std::chrono::duration<double>(delay) > deadline) break;
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));
  }
  *transport_error = true;
  *raw = "";
  return YesNo::kInvalid;
}

ConfidenceVerdict ConfidenceScorer::Score(std::string_view record_id,
                                          std::string_view spoken,
                                          std::string_view pseudo_written) {
  std::string key;
  key.reserve(spoken.size() + pseudo_written.size() + 64);
  key.append(spoken);
  key.push_back('\x1f');
  key.append(pseudo_written);
  key.push_back('\x1f');
  key += prompt1_.id + '\x1f' + prompt2_.id + '\x1f' + provider_->id();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++cache_hits_;
      ConfidenceVerdict verdict = it->second;
      verdict.record_id = std::string(record_id);
      return verdict;
    }
  }

  ConfidenceVerdict verdict;
  verdict.record_id = std::string(record_id);
  verdict.raw_responses.resize(2);
  bool transport = false;
  verdict.prompt1_answer = Query(prompt1_.Render(spoken, pseudo_written),
                                 &verdict.raw_responses[0], &transport);
  if (!transport) {
    verdict.prompt2_answer = Query(prompt2_.Render(spoken, pseudo_written),
                                   &verdict.raw_responses[1], &transport);
  }
  verdict.transport_error = transport;
  verdict.accepted = verdict.prompt1_answer == YesNo::kYes &&
                     verdict.prompt2_answer == YesNo::kYes;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(std::move(key), verdict);
  }
  return verdict;
}

std::vector<ConfidenceVerdict> ConfidenceScorer::ScoreBatch(
    const std::vector<std::array<std::string, 3>>& id_spoken_pseudo,
    int max_in_flight) {
  std::vector<ConfidenceVerdict> verdicts(id_spoken_pseudo.size());
  const int workers = std::max(
      1, std::min<int>(max_in_flight, id_spoken_pseudo.size()));
  if (workers == 1) {
    for (size_t i = 0; i < id_spoken_pseudo.size(); ++i) {
      const auto& [id, spoken, pseudo] = id_spoken_pseudo[i];
      verdicts[i] = Score(id, spoken, pseudo);
    }
    return verdicts;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (size_t i = next.fetch_add(1); i < id_spoken_pseudo.size();
           i = next.fetch_add(1)) {
        const auto& [id, spoken, pseudo] = id_spoken_pseudo[i];
        verdicts[i] = Score(id, spoken, pseudo);
      }
    });
  }
  for (auto& t : pool) t.join();
  return verdicts;
}

}  // namespace itn
