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

#include "itn/corpus.h"

#include <sstream>

#include "doctest.h"
#include "itn/rng.h"
#include "itn/unicode.h"

using namespace itn;

namespace {

std::vector<CorpusRecord> SyntheticRecords(size_t count, uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<CorpusRecord> records;
  const std::vector<std::string> spoken_pool = {"사십 명", "이천십삼 년",
                                                "오십 퍼센트", "할 일 많아"};
  const std::vector<std::string> written_pool = {"40 명", "2013 년",
                                                 "50 퍼센트", "할 일 많아"};
  for (size_t i = 0; i < count; ++i) {
    CorpusRecord record;
    record.id = "r" + std::to_string(i);
    record.dataset_type = static_cast<DatasetType>(rng.Uniform(3));
    size_t pick = rng.Uniform(spoken_pool.size());
    if (record.dataset_type != DatasetType::kTypeII)
      record.spoken = spoken_pool[pick];
    if (record.dataset_type != DatasetType::kTypeIII)
      record.written = written_pool[pick];
    if (rng.Bernoulli(0.5)) record.provenance.push_back("mtn");
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("paper example line parses with both sides") {
  CorpusRecord record = RecordFromJsonLine(
      R"({"id":"a","spoken":"사십 명","written":"40 명","dataset_type":"I"})",
      1);
  CHECK(record.id == "a");
  REQUIRE(record.spoken.has_value());
  REQUIRE(record.written.has_value());
  CHECK(*record.spoken == "사십 명");
  CHECK(*record.written == "40 명");
  CHECK(record.dataset_type == DatasetType::kTypeI);
}

TEST_CASE("empty stream yields no records and no error") {
  std::istringstream in("");
  CorpusReader reader(in);
  CHECK(!reader.Next().has_value());
}

TEST_CASE("type presence violations") {
  std::istringstream in(
      R"({"id":"x","written":"40","dataset_type":"III"})" "\n");
  CorpusReader reader(in, {.expected_type = DatasetType::kTypeIII});
  CHECK_THROWS_AS(reader.Next(), CorpusError);

  std::istringstream in2(
      R"({"id":"x","written":"40","dataset_type":"III"})" "\n");
  CorpusReader lax(in2, {.expected_type = DatasetType::kTypeIII,
                         .strict = false});
  CHECK(!lax.Next().has_value());
  CHECK(lax.diagnostics().size() == 1);
}

TEST_CASE("malformed line reports its number") {
  std::istringstream in("{}\n{broken\n");
  CorpusReader reader(in, {.strict = false});
  reader.Next();
  REQUIRE(reader.diagnostics().size() == 2);
  CHECK(reader.diagnostics()[1].find("line 2") != std::string::npos);
}

TEST_CASE("non-nfc text is stored composed") {
  // Decomposed 사 as lead+vowel jamo.
  std::string decomposed = EncodeUtf8({0x1109, 0x1161});
  CorpusRecord record;
  record.id = "n";
  record.dataset_type = DatasetType::kTypeIII;
  record.spoken = decomposed;
  std::string line = RecordToJsonLine(record);
  CorpusRecord back = RecordFromJsonLine(line, 1);
  CHECK(*back.spoken == "사");
}

TEST_CASE("round trip is byte-identical on the second write") {
  auto records = SyntheticRecords(100, 7);
  std::ostringstream first;
  CHECK(WriteCorpus(records, first) == 100);

  std::istringstream in(first.str());
  CorpusReader reader(in);
  std::vector<CorpusRecord> reread;
  while (auto r = reader.Next()) reread.push_back(std::move(*r));
  REQUIRE(reread.size() == records.size());

  std::ostringstream second;
  WriteCorpus(reread, second);
  CHECK(first.str() == second.str());

  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(reread[i].id == records[i].id);
    CHECK(reread[i].spoken == records[i].spoken);
    CHECK(reread[i].written == records[i].written);
    CHECK(reread[i].dataset_type == records[i].dataset_type);
    CHECK(reread[i].provenance == records[i].provenance);
  }
}

TEST_CASE("nbest line round trip keeps descending order") {
  HypothesisSet hyps;
  hyps.record_id = "h1";
  hyps.spoken = "사십 명";
  hyps.hypotheses = {{"40 명", -0.5}, {"사십 명", -1.5}};
  std::string line = HypothesisSetToJsonLine(hyps);
  HypothesisSet back = HypothesisSetFromJsonLine(line, 1);
  CHECK(back.record_id == "h1");
  REQUIRE(back.hypotheses.size() == 2);
  CHECK(back.hypotheses[0].text == "40 명");
  CHECK(back.hypotheses[0].score == doctest::Approx(-0.5));

  // Out-of-order scores are re-sorted, stably.
  std::string shuffled =
      R"({"record_id":"h2","spoken":"x","hypotheses":[)"
      R"({"text":"b","score":-2.0},{"text":"a","score":-1.0}]})";
  HypothesisSet sorted = HypothesisSetFromJsonLine(shuffled, 1);
  CHECK(sorted.hypotheses[0].text == "a");
  CHECK_THROWS_AS(
      HypothesisSetFromJsonLine(
          R"({"record_id":"h3","spoken":"x","hypotheses":[]})", 1),
      CorpusError);
}

}  // TEST_SUITE
