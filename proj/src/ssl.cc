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

#include "itn/ssl.h"

#include <chrono>
#include <cstdlib>
#include <fstream>

#include "digest.h"
#include "itn/rng.h"

namespace itn {

using nlohmann::json;
using nlohmann::ordered_json;

SslRoundPlan SslRoundPlan::FromJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SslError("cannot open plan file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SslError(std::string("bad plan JSON: ") + e.what());
  }
  SslRoundPlan plan;
  plan.round_index = j.value("round_index", 1);
  plan.type1_corpus = j.value("type1_corpus", std::string());
  plan.type2_corpus = j.value("type2_corpus", std::string());
  plan.type3_corpus = j.value("type3_corpus", std::string());
  plan.accepted_out = j.value("accepted_out", std::string());
  plan.manifest_out = j.value("manifest_out", std::string());
  plan.report_out = j.value("report_out", std::string());
  plan.trainer_command = j.value("trainer_command", std::string());
  plan.trainer_epochs = j.value("trainer_epochs", 10);
  plan.seed = j.value("seed", 0ull);
  plan.use_pa = j.value("use_pa", true);
  plan.grammar = j.value("grammar", std::string("ko"));
  plan.stub_fixture = j.value("stub_fixture", std::string());
  if (j.contains("teacher")) {
    const auto& t = j["teacher"];
    std::string kind = t.value("kind", "rule");
    if (kind == "rule") {
      plan.teacher.kind = BackendKind::kRuleBased;
    } else if (kind == "mock") {
      plan.teacher.kind = BackendKind::kMock;
    } else if (kind == "external") {
      plan.teacher.kind = BackendKind::kExternal;
    } else {
      throw SslError("unknown teacher kind: " + kind);
    }
    plan.teacher.n_best = t.value("n_best", 5);
    plan.teacher.grammar = t.value("grammar", plan.grammar);
    plan.teacher.external_command = t.value("command", std::string());
    if (t.contains("mock")) {
      const auto& m = t["mock"];
      plan.teacher.mock.p_corrupt_best = m.value("p_corrupt_best", 0.0);
      plan.teacher.mock.seed = m.value("seed", 0ull);
    }
  } else {
    plan.teacher.grammar = plan.grammar;
  }
  if (j.contains("pa")) {
    const auto& p = j["pa"];
    plan.pa.alpha = p.value("alpha", plan.pa.alpha);
    plan.pa.eta = p.value("eta", plan.pa.eta);
    if (p.contains("blacklist")) {
      plan.pa.blacklist =
          Blacklist(DecodeUtf8(p["blacklist"].get<std::string>()));
    }
  }
  if (j.contains("da")) {
    const auto& d = j["da"];
    plan.da.p_repeat = d.value("p_repeat", plan.da.p_repeat);
    plan.da.max_repeats = d.value("max_repeats", plan.da.max_repeats);
    plan.da.p_number_sub = d.value("p_number_sub", plan.da.p_number_sub);
    plan.da.sub_digit_len_min =
        d.value("sub_digit_len_min", plan.da.sub_digit_len_min);
    plan.da.sub_digit_len_max =
        d.value("sub_digit_len_max", plan.da.sub_digit_len_max);
    plan.da.p_space_noise = d.value("p_space_noise", plan.da.p_space_noise);
  }
  plan.da.seed = plan.seed;
  if (j.contains("provider")) {
    ProviderConfig pc;
    const auto& p = j["provider"];
    pc.endpoint = p.value("endpoint", pc.endpoint);
    pc.path = p.value("path", pc.path);
    pc.model = p.value("model", pc.model);
    pc.temperature = p.value("temperature", pc.temperature);
    pc.timeout_s = p.value("timeout_s", pc.timeout_s);
    plan.http_provider = pc;
  }
  if (plan.type3_corpus.empty()) throw SslError("plan: type3_corpus required");
  if (plan.accepted_out.empty() || plan.manifest_out.empty()) {
    throw SslError("plan: accepted_out and manifest_out required");
  }
  return plan;
}

ordered_json SslRoundPlan::ToJson() const {
  ordered_json j;
  j["round_index"] = round_index;
  j["type1_corpus"] = type1_corpus;
  j["type2_corpus"] = type2_corpus;
  j["type3_corpus"] = type3_corpus;
  j["accepted_out"] = accepted_out;
  j["manifest_out"] = manifest_out;
  j["trainer_command"] = trainer_command;
  j["trainer_epochs"] = trainer_epochs;
  j["seed"] = seed;
  j["use_pa"] = use_pa;
  j["grammar"] = grammar;
  j["stub_fixture"] = stub_fixture;
  j["teacher"] = {{"kind", teacher.kind == BackendKind::kRuleBased ? "rule"
                           : teacher.kind == BackendKind::kMock   ? "mock"
                                                                  : "external"},
                  {"n_best", teacher.n_best},
                  {"grammar", teacher.grammar},
                  {"command", teacher.external_command}};
  j["pa"] = {{"alpha", pa.alpha},
             {"eta", pa.eta},
             {"blacklist", EncodeUtf8(pa.blacklist.Chars())}};
  j["da"] = {{"p_repeat", da.p_repeat},
             {"max_repeats", da.max_repeats},
             {"p_number_sub", da.p_number_sub},
             {"sub_digit_len_min", da.sub_digit_len_min},
             {"sub_digit_len_max", da.sub_digit_len_max},
             {"p_space_noise", da.p_space_noise}};
  return j;
}

GenerateOutcome GeneratePseudoWritten(const std::vector<CorpusRecord>& type3,
                                      Backend* backend, const PaConfig& pa,
                                      bool use_pa, int round_index) {
  GenerateOutcome outcome;
  const std::string round_tag = "ssl-round-" + std::to_string(round_index);
  for (const auto& record : type3) {
    if (!record.spoken) {
      outcome.skipped.push_back(record.id + ": no spoken side");
      continue;
    }
    HypothesisSet hyps;
    std::string pseudo;
    try {
      hyps = backend->Infer(record.id, *record.spoken);
      pseudo = use_pa ? PostAlign(hyps, pa).written
                      : hyps.hypotheses.front().text;
    } catch (const std::exception& e) {
      outcome.skipped.push_back(record.id + ": " + e.what());
      continue;
    }
    CorpusRecord labeled = record;
    labeled.written = pseudo;
    labeled.provenance.push_back("pseudo-written");
    labeled.provenance.push_back(round_tag);
    outcome.pairs.push_back({std::move(labeled), std::move(hyps)});
  }
  return outcome;
}

FilterOutcome FilterWithConfidence(
    const std::vector<std::pair<CorpusRecord, HypothesisSet>>& pairs,
    ConfidenceScorer* scorer) {
  FilterOutcome outcome;
  for (const auto& [record, hyps] : pairs) {
    ConfidenceVerdict verdict =
        scorer->Score(record.id, *record.spoken, *record.written);
    if (verdict.accepted) {
      outcome.accepted.push_back(record);
    } else {
      // Copy-through: the spoken text stands in for the rejected conversion;
      // transport failures land here too, conservatively.
      CorpusRecord copied = record;
      copied.written = copied.spoken;
      copied.provenance.push_back("copy-through");
      outcome.copied_through.push_back(std::move(copied));
    }
  }
  return outcome;
}

std::vector<CorpusRecord> AssembleTrainingSet(
    const std::vector<CorpusRecord>& type1,
    const std::vector<CorpusRecord>& type2,
    const std::vector<CorpusRecord>& type3_labeled,
    const VerbalizationGrammar& grammar, const AugmentConfig& da_cfg) {
  std::vector<CorpusRecord> manifest;

  auto spacing_cfg = [&](const CorpusRecord& record) {
    AugmentConfig cfg = da_cfg;
    cfg.seed = RecordSeed(da_cfg.seed, record.id, kStageSpacing);
    return cfg;
  };

  // Type I originals, spacing-noised on the spoken side.
  for (const auto& record : type1) {
    CorpusRecord row = record;
    row.spoken =
        SpacingNoiseForPair(*record.spoken, *record.written, spacing_cfg(record));
    row.provenance.push_back("spacing-noise");
    manifest.push_back(std::move(row));
  }
  // DA of Type I.
  for (const auto& record : type1) {
    auto augmented = AugmentRecord(record, grammar, da_cfg);
    manifest.push_back(std::move(augmented.back()));
  }
  // DA of Type II.
  for (const auto& record : type2) {
    auto augmented = AugmentRecord(record, grammar, da_cfg);
    manifest.push_back(std::move(augmented.back()));
  }
  // DA of accepted pseudo-written (copy-through rows are not re-augmented).
  for (const auto& record : type3_labeled) {
    bool copy_through = false;
    for (const auto& tag : record.provenance) {
      if (tag == "copy-through") {
        copy_through = true;
        break;
      }
    }
    if (copy_through) continue;
    auto augmented = AugmentRecord(record, grammar, da_cfg);
    manifest.push_back(std::move(augmented.back()));
  }
  // Type III (spoken, pseudo-written / copy-through) pairs, spacing-noised.
  for (const auto& record : type3_labeled) {
    CorpusRecord row = record;
    row.spoken =
        SpacingNoiseForPair(*record.spoken, *record.written, spacing_cfg(record));
    row.provenance.push_back("spacing-noise");
    manifest.push_back(std::move(row));
  }

  for (const auto& row : manifest) {
    if (!row.spoken || !row.written) {
      throw SslError("manifest row " + row.id + " is missing a side");
    }
  }
  return manifest;
}

ordered_json RoundReport::ToJson() const {
  ordered_json j;
  j["round_index"] = round_index;
  j["type3_input"] = type3_input;
  j["generated"] = generated;
  j["skipped"] = skipped;
  j["accepted"] = accepted;
  j["copied_through"] = copied_through;
  j["acceptance_rate"] = acceptance_rate;
  j["copy_through_rate"] = copy_through_rate;
  j["manifest_records"] = manifest_records;
  j["trainer_exit_code"] = trainer_exit_code;
  j["seconds"] = seconds;
  return j;
}

RoundReport RunRound(const SslRoundPlan& plan) {
  const auto start = std::chrono::steady_clock::now();

  auto read_optional = [](const std::string& path, DatasetType type) {
    if (path.empty()) return std::vector<CorpusRecord>{};
    return ReadCorpusFile(path, {.expected_type = type, .strict = true});
  };
  std::vector<CorpusRecord> type1 =
      read_optional(plan.type1_corpus, DatasetType::kTypeI);
  std::vector<CorpusRecord> type2 =
      read_optional(plan.type2_corpus, DatasetType::kTypeII);
  std::vector<CorpusRecord> type3 =
      read_optional(plan.type3_corpus, DatasetType::kTypeIII);

  std::unique_ptr<Backend> teacher = MakeBackend(plan.teacher);
  GenerateOutcome generated =
      GeneratePseudoWritten(type3, teacher.get(), plan.pa, plan.use_pa,
                            plan.round_index);

  std::unique_ptr<Provider> provider;
  if (plan.http_provider) {
    provider = MakeHttpProvider(*plan.http_provider);
  } else if (!plan.stub_fixture.empty()) {
    provider = StubProvider::FromFixtureFile(plan.stub_fixture);
  } else {
    provider = StubProvider::Constant("yes", "yes");
  }
  ConfidenceScorer scorer(provider.get());
  FilterOutcome filtered = FilterWithConfidence(generated.pairs, &scorer);

  std::vector<CorpusRecord> type3_labeled = filtered.accepted;
  type3_labeled.insert(type3_labeled.end(), filtered.copied_through.begin(),
                       filtered.copied_through.end());

  VerbalizationGrammar grammar = VerbalizationGrammar::Resolve(plan.grammar);
  AugmentConfig da_cfg = plan.da;
  da_cfg.seed = plan.seed;
  std::vector<CorpusRecord> manifest =
      AssembleTrainingSet(type1, type2, type3_labeled, grammar, da_cfg);

  WriteCorpusFile(filtered.accepted, plan.accepted_out);
  WriteCorpusFile(manifest, plan.manifest_out);

  // Header: everything needed to audit and reproduce the round.
  ordered_json header;
  header["round_index"] = plan.round_index;
  header["seed"] = plan.seed;
  header["plan"] = plan.ToJson();
  ordered_json digests;
  if (!plan.type1_corpus.empty())
    digests["type1"] = Sha256HexOfFile(plan.type1_corpus);
  if (!plan.type2_corpus.empty())
    digests["type2"] = Sha256HexOfFile(plan.type2_corpus);
  digests["type3"] = Sha256HexOfFile(plan.type3_corpus);
  header["input_digests"] = digests;
  header["manifest_digest"] = Sha256HexOfFile(plan.manifest_out);
  {
    std::ofstream out(plan.manifest_out + ".header.json");
    out << header.dump(2) << '\n';
    if (!out) throw SslError("cannot write manifest header");
  }

  RoundReport report;
  report.round_index = plan.round_index;
  report.type3_input = type3.size();
  report.generated = generated.pairs.size();
  report.skipped = generated.skipped.size();
  report.accepted = filtered.accepted.size();
  report.copied_through = filtered.copied_through.size();
  const size_t labeled = report.accepted + report.copied_through;
  report.acceptance_rate =
      labeled == 0 ? 0.0 : static_cast<double>(report.accepted) / labeled;
  report.copy_through_rate =
      labeled == 0 ? 0.0
                   : static_cast<double>(report.copied_through) / labeled;
  report.manifest_records = manifest.size();

  int trainer_exit = 0;
  if (!plan.trainer_command.empty()) {
    std::string cmd = plan.trainer_command + " '" + plan.manifest_out + "'";
    trainer_exit = std::system(cmd.c_str());
    report.trainer_exit_code = trainer_exit;
  }
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  {
    std::string report_path = plan.report_out.empty()
                                  ? plan.manifest_out + ".report.json"
                                  : plan.report_out;
    std::ofstream out(report_path);
    out << report.ToJson().dump(2) << '\n';
  }
  if (trainer_exit != 0) {
    throw SslError("trainer command failed with status " +
                   std::to_string(trainer_exit) +
                   " (round artifacts are persisted)");
  }
  return report;
}

}  // namespace itn
