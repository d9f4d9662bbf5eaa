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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "itn/augment.h"
#include "itn/corpus.h"
#include "itn/itn_backend.h"
#include "itn/metrics.h"
#include "itn/mtn.h"
#include "itn/post_align.h"
#include "itn/ssl.h"

namespace {

using itn::Blacklist;
using itn::CorpusRecord;
using itn::HypothesisSet;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitRuntime = 2;

void RequireFile(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw std::invalid_argument("input file not found: " + path);
  }
}

// Every output artifact gets a sidecar echoing the effective configuration,
// so runs are auditable and re-runnable.
void WriteArtifactHeader(const std::string& artifact_path,
                         const std::string& subcommand,
                         const ordered_json& config) {
  ordered_json header;
  header["artifact"] = artifact_path;
  header["subcommand"] = subcommand;
  header["config"] = config;
  std::ofstream out(artifact_path + ".meta.json");
  out << header.dump(2) << '\n';
}

ordered_json PaConfigJson(const itn::PaConfig& cfg) {
  return {{"alpha", cfg.alpha},
          {"eta", cfg.eta},
          {"blacklist", itn::EncodeUtf8(cfg.blacklist.Chars())},
          {"reject_deletions", !cfg.rejection_rules.empty()}};
}

nlohmann::ordered_json TraceJson(const std::string& record_id,
                                 const itn::PaResult& result) {
  auto pair_json = [](const itn::NormalizationPair& pair) {
    return ordered_json{{"s", pair.SUtf8()},
                        {"w", pair.WUtf8()},
                        {"s_begin", pair.s_range.begin},
                        {"s_end", pair.s_range.end}};
  };
  ordered_json j;
  j["record_id"] = record_id;
  j["kept_hypotheses"] = result.trace.kept_hypothesis_count;
  ordered_json sets = ordered_json::array();
  for (const auto& set : result.trace.pair_sets) {
    ordered_json one = ordered_json::array();
    for (const auto& pair : set) one.push_back(pair_json(pair));
    sets.push_back(one);
  }
  j["pair_sets"] = sets;
  ordered_json candidates = ordered_json::array();
  for (const auto& c : result.trace.candidates) {
    auto pj = pair_json(c.pair);
    pj["origin"] = itn::ToString(c.origin);
    if (c.origin == itn::CandidateOrigin::kFromVote)
      pj["vote_count"] = c.vote_count;
    candidates.push_back(pj);
  }
  j["candidates"] = candidates;
  ordered_json rejected = ordered_json::array();
  for (const auto& r : result.trace.rejected) {
    auto pj = pair_json(r.pair);
    pj["reason"] = itn::ToString(r.reason);
    rejected.push_back(pj);
  }
  j["rejected"] = rejected;
  j["written"] = result.written;
  return j;
}

int RunMtn(const std::string& grammar_arg, const std::string& mode,
           uint64_t seed, const std::string& text, const std::string& in_path,
           const std::string& out_path) {
  itn::VerbalizationGrammar grammar =
      itn::VerbalizationGrammar::Resolve(grammar_arg);
  std::vector<std::string> inputs;
  if (!text.empty()) {
    inputs.push_back(text);
  } else if (!in_path.empty()) {
    RequireFile(in_path);
    std::ifstream in(in_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty()) inputs.push_back(line);
    }
  } else {
    std::string line;
    while (std::getline(std::cin, line)) {
      if (!line.empty()) inputs.push_back(line);
    }
  }
  std::ofstream file_out;
  if (!out_path.empty()) file_out.open(out_path);
  std::ostream& out = out_path.empty() ? std::cout : file_out;
  for (const auto& written : inputs) {
    itn::MtnDiagnostics diagnostics;
    if (mode == "enumerate") {
      for (const auto& variant :
           itn::EnumerateSpoken(written, grammar, &diagnostics)) {
        out << variant << '\n';
      }
    } else {
      out << itn::SampleSpoken(written, grammar, seed, &diagnostics).text
          << '\n';
    }
    for (const auto& warning : diagnostics.warnings)
      std::cerr << "warning: " << warning << '\n';
  }
  return kExitOk;
}

int RunDemo() {
  // Worked deletion-restoration example: the backend deleted a word stem and
  // converted the number; post-aligning restores the stem and keeps the
  // conversion, while the baseline scheme reproduces the corrupted text.
  HypothesisSet hyps;
  hyps.record_id = "demo";
  hyps.spoken = "사용자의 오십 퍼센트";
  hyps.hypotheses = {{"자의 50 퍼센트", -0.2},
                     {"사용자의 50 퍼센트", -0.8},
                     {"사용자의 50 퍼센트", -1.3},
                     {"사용자 오십프로", -9.0}};

  std::cout << "spoken : " << hyps.spoken << "\n";
  for (size_t i = 0; i < hyps.hypotheses.size(); ++i) {
    std::cout << "hyp " << i << "  : " << hyps.hypotheses[i].text
              << "  (score " << hyps.hypotheses[i].score << ")\n";
  }

  itn::PaConfig proposed = itn::PaConfig::Proposed();
  itn::PaResult result = itn::PostAlign(hyps, proposed);
  std::cout << "\nalpha=" << proposed.alpha << " keeps "
            << result.trace.kept_hypothesis_count << " of "
            << hyps.hypotheses.size() << " hypotheses\n";
  for (size_t m = 0; m < result.trace.pair_sets.size(); ++m) {
    std::cout << "D_" << m << "    :";
    for (const auto& pair : result.trace.pair_sets[m]) {
      std::cout << " (\"" << pair.SUtf8() << "\", \"" << pair.WUtf8()
                << "\")";
    }
    std::cout << "\n";
  }
  for (const auto& candidate : result.trace.candidates) {
    std::cout << "candidate (\"" << candidate.pair.SUtf8() << "\", \""
              << candidate.pair.WUtf8() << "\") "
              << itn::ToString(candidate.origin) << "\n";
  }
  for (const auto& rejection : result.trace.rejected) {
    std::cout << "rejected  (\"" << rejection.pair.SUtf8() << "\", \""
              << rejection.pair.WUtf8() << "\") "
              << itn::ToString(rejection.reason);
    if (rejection.reason == itn::RejectReason::kDeletionNormalization) {
      std::cout << "  -> \"" << rejection.pair.SUtf8() << "\" restored";
    }
    std::cout << "\n";
  }
  std::cout << "post-aligned : " << result.written << "\n";

  itn::PaResult baseline = itn::PostAlign(hyps, itn::PaConfig::Baseline());
  std::cout << "baseline     : " << baseline.written
            << "   (deletions allowed, no blacklist)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ITN post-aligning, data generation and evaluation toolkit"};
  app.require_subcommand(1);

  // --- augment ---
  auto* augment = app.add_subcommand("augment", "Noise + MTN data augmentation");
  std::string aug_in, aug_out, aug_grammar = "ko", aug_config;
  uint64_t aug_seed = 0;
  augment->add_option("--in", aug_in, "input corpus (JSON lines)")->required();
  augment->add_option("--out", aug_out, "output corpus")->required();
  augment->add_option("--grammar", aug_grammar,
                      "builtin locale (ko|en) or grammar file");
  augment->add_option("--config", aug_config, "augment config JSON file");
  augment->add_option("--seed", aug_seed, "RNG seed (non-paper default 0)");

  // --- mtn ---
  auto* mtn = app.add_subcommand("mtn", "Multi-text normalization");
  std::string mtn_grammar = "ko", mtn_mode = "enumerate", mtn_text, mtn_in,
              mtn_out;
  uint64_t mtn_seed = 0;
  mtn->add_option("--grammar", mtn_grammar,
                  "builtin locale (ko|en) or grammar file");
  mtn->add_option("--mode", mtn_mode, "enumerate|sample")
      ->check(CLI::IsMember({"enumerate", "sample"}));
  mtn->add_option("--seed", mtn_seed, "sampling seed");
  mtn->add_option("--text", mtn_text, "single written text");
  mtn->add_option("--in", mtn_in, "written text file, one per line");
  mtn->add_option("--out", mtn_out, "output file (default stdout)");

  // --- infer ---
  auto* infer = app.add_subcommand("infer", "Run an ITN backend over a corpus");
  std::string inf_in, inf_out, inf_backend = "rule", inf_grammar = "ko",
              inf_command;
  int inf_nbest = 5;
  double inf_corrupt = 0.0;
  uint64_t inf_seed = 0;
  infer->add_option("--in", inf_in, "corpus with spoken sides")->required();
  infer->add_option("--out", inf_out, "N-best JSON lines output")->required();
  infer->add_option("--backend", inf_backend, "rule|mock|external")
      ->check(CLI::IsMember({"rule", "mock", "external"}));
  infer->add_option("--grammar", inf_grammar, "grammar for rule/mock");
  infer->add_option("--nbest", inf_nbest, "beam width (paper default 5)");
  infer->add_option("--command", inf_command, "external backend command");
  infer->add_option("--mock-corrupt", inf_corrupt,
                    "mock: probability of corrupting the 1-best (non-paper)");
  infer->add_option("--seed", inf_seed, "mock RNG seed");

  // --- post-align ---
  auto* pa_cmd = app.add_subcommand("post-align",
                                    "Repair N-best hypotheses into written text");
  std::string pa_in, pa_out, pa_trace, pa_blacklist = " ";
  double pa_alpha = 5.0;
  int pa_eta = 1;
  bool pa_allow_deletions = false;
  int pa_jobs = 0;
  pa_cmd->add_option("--nbest", pa_in, "N-best JSON lines input")->required();
  pa_cmd->add_option("--out", pa_out, "output corpus")->required();
  pa_cmd->add_option("--alpha", pa_alpha, "score-gap drop threshold (paper: 5)");
  pa_cmd->add_option("--eta", pa_eta, "vote-count threshold (paper: 1)");
  pa_cmd->add_option("--blacklist", pa_blacklist,
                     "characters forbidden as region end-points (default space)");
  pa_cmd->add_flag("--allow-deletions", pa_allow_deletions,
                   "do not reject deletion normalizations");
  pa_cmd->add_option("--trace", pa_trace, "trace JSON lines output");
  pa_cmd->add_option("--jobs", pa_jobs, "worker threads (default: cores)");

  // --- ssl-round ---
  auto* ssl_cmd = app.add_subcommand("ssl-round",
                                     "One semi-supervised labeling round");
  std::string ssl_plan;
  ssl_cmd->add_option("--plan", ssl_plan, "round plan JSON file")->required();

  // --- evaluate ---
  auto* eval_cmd = app.add_subcommand("evaluate", "CER / I-CER / NI-CER");
  std::string ev_hyp, ev_ref, ev_report;
  bool ev_ignore_space = false;
  int ev_jobs = 0;
  eval_cmd->add_option("--hyp", ev_hyp, "hypothesis corpus")->required();
  eval_cmd->add_option("--ref", ev_ref, "reference corpus")->required();
  eval_cmd->add_option("--report", ev_report, "report JSON path");
  eval_cmd->add_flag("--ignore-space", ev_ignore_space,
                     "strip whitespace before scoring");
  eval_cmd->add_option("--jobs", ev_jobs, "worker threads (default: cores)");

  // --- demo ---
  app.add_subcommand("demo", "Worked deletion-restoration example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const int default_jobs =
      std::max(1u, std::thread::hardware_concurrency());

  try {
    if (augment->parsed()) {
      RequireFile(aug_in);
      itn::AugmentConfig cfg;
      if (!aug_config.empty()) {
        RequireFile(aug_config);
        std::ifstream in(aug_config);
        nlohmann::json j;
        in >> j;
        cfg.p_repeat = j.value("p_repeat", cfg.p_repeat);
        cfg.max_repeats = j.value("max_repeats", cfg.max_repeats);
        cfg.p_number_sub = j.value("p_number_sub", cfg.p_number_sub);
        cfg.sub_digit_len_min =
            j.value("sub_digit_len_min", cfg.sub_digit_len_min);
        cfg.sub_digit_len_max =
            j.value("sub_digit_len_max", cfg.sub_digit_len_max);
        cfg.p_space_noise = j.value("p_space_noise", cfg.p_space_noise);
      }
      cfg.seed = aug_seed;
      auto grammar = itn::VerbalizationGrammar::Resolve(aug_grammar);
      auto records = itn::ReadCorpusFile(aug_in);
      std::vector<CorpusRecord> out;
      for (const auto& record : records) {
        for (auto& produced : itn::AugmentRecord(record, grammar, cfg)) {
          out.push_back(std::move(produced));
        }
      }
      size_t n = itn::WriteCorpusFile(out, aug_out);
      WriteArtifactHeader(aug_out, "augment",
                          {{"in", aug_in},
                           {"grammar", aug_grammar},
                           {"seed", aug_seed},
                           {"p_repeat", cfg.p_repeat},
                           {"max_repeats", cfg.max_repeats},
                           {"p_number_sub", cfg.p_number_sub},
                           {"p_space_noise", cfg.p_space_noise}});
      std::cerr << "augment: wrote " << n << " records\n";
      return kExitOk;
    }

    if (mtn->parsed()) {
      return RunMtn(mtn_grammar, mtn_mode, mtn_seed, mtn_text, mtn_in, mtn_out);
    }

    if (infer->parsed()) {
      RequireFile(inf_in);
      itn::BackendSpec spec;
      spec.n_best = inf_nbest;
      spec.grammar = inf_grammar;
      if (inf_backend == "rule") {
        spec.kind = itn::BackendKind::kRuleBased;
      } else if (inf_backend == "mock") {
        spec.kind = itn::BackendKind::kMock;
        spec.mock.p_corrupt_best = inf_corrupt;
        spec.mock.seed = inf_seed;
      } else {
        spec.kind = itn::BackendKind::kExternal;
        spec.external_command = inf_command;
      }
      auto backend = itn::MakeBackend(spec);
      auto records = itn::ReadCorpusFile(inf_in);
      std::vector<std::string> ids, spoken;
      for (const auto& record : records) {
        if (!record.spoken) continue;
        ids.push_back(record.id);
        spoken.push_back(*record.spoken);
      }
      auto sets = backend->InferBatch(ids, spoken);
      itn::WriteNbestFile(sets, inf_out);
      WriteArtifactHeader(inf_out, "infer",
                          {{"in", inf_in},
                           {"backend", inf_backend},
                           {"grammar", inf_grammar},
                           {"nbest", inf_nbest},
                           {"mock_corrupt", inf_corrupt},
                           {"seed", inf_seed}});
      std::cerr << "infer: wrote " << sets.size() << " hypothesis sets\n";
      return kExitOk;
    }

    if (pa_cmd->parsed()) {
      RequireFile(pa_in);
      itn::PaConfig cfg;
      cfg.alpha = pa_alpha;
      cfg.eta = pa_eta;
      cfg.blacklist = Blacklist(itn::DecodeUtf8(pa_blacklist));
      if (pa_allow_deletions) cfg.rejection_rules.clear();
      auto sets = itn::ReadNbestFile(pa_in);
      std::vector<itn::PaResult> results(sets.size());
      const int jobs = pa_jobs > 0 ? pa_jobs : default_jobs;
      std::atomic<size_t> next{0};
      std::vector<std::thread> pool;
      for (int w = 0; w < std::max(1, std::min<int>(jobs, sets.size())); ++w) {
        pool.emplace_back([&]() {
          for (size_t i = next.fetch_add(1); i < sets.size();
               i = next.fetch_add(1)) {
            results[i] = itn::PostAlign(sets[i], cfg);
          }
        });
      }
      for (auto& t : pool) t.join();

      std::vector<CorpusRecord> out;
      out.reserve(sets.size());
      for (size_t i = 0; i < sets.size(); ++i) {
        CorpusRecord record;
        record.id = sets[i].record_id;
        record.spoken = sets[i].spoken;
        record.written = results[i].written;
        record.dataset_type = itn::DatasetType::kTypeI;
        record.provenance = {"post-aligned"};
        out.push_back(std::move(record));
      }
      itn::WriteCorpusFile(out, pa_out);
      ordered_json config = PaConfigJson(cfg);
      config["nbest_in"] = pa_in;
      WriteArtifactHeader(pa_out, "post-align", config);
      if (!pa_trace.empty()) {
        std::ofstream trace(pa_trace);
        for (size_t i = 0; i < sets.size(); ++i) {
          trace << TraceJson(sets[i].record_id, results[i]).dump() << '\n';
        }
        WriteArtifactHeader(pa_trace, "post-align-trace", config);
      }
      std::cerr << "post-align: wrote " << out.size() << " records\n";
      return kExitOk;
    }

    if (ssl_cmd->parsed()) {
      RequireFile(ssl_plan);
      itn::SslRoundPlan plan = itn::SslRoundPlan::FromJsonFile(ssl_plan);
      itn::RoundReport report = itn::RunRound(plan);
      std::cout << report.ToJson().dump(2) << '\n';
      return kExitOk;
    }

    if (eval_cmd->parsed()) {
      RequireFile(ev_hyp);
      RequireFile(ev_ref);
      auto hyp = itn::ReadCorpusFile(ev_hyp);
      auto ref = itn::ReadCorpusFile(ev_ref);
      itn::EvalOptions options;
      options.ignore_space = ev_ignore_space;
      options.jobs = ev_jobs > 0 ? ev_jobs : default_jobs;
      itn::EvalReport report = itn::Evaluate(hyp, ref, options);
      ordered_json j = report.ToJson();
      if (!ev_report.empty()) {
        std::ofstream out(ev_report);
        out << j.dump(2) << '\n';
        WriteArtifactHeader(ev_report, "evaluate",
                            {{"hyp", ev_hyp},
                             {"ref", ev_ref},
                             {"ignore_space", ev_ignore_space}});
      }
      std::cout << "CER    " << report.cer << "\n"
                << "I-CER  " << report.i_cer << "\n"
                << "NI-CER " << report.ni_cer << "\n";
      return kExitOk;
    }

    return RunDemo();
  } catch (const itn::CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
