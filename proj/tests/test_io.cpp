// Copyright 2026 The synvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synvec/io.hpp"

#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace synvec;
using Catch::Matchers::WithinAbs;

TEST_CASE("corpus jsonl: parse documents with optional fields") {
  testing::TempFile file(
      R"({"id": "d1", "text": "hello world", "label": "greet", "author": "ann"})"
      "\n"
      R"({"id": "d2", "text": "bye", "split": "train"})"
      "\n");
  const LabeledCorpus corpus = read_corpus_jsonl(file.path());
  REQUIRE(corpus.documents.size() == 2);
  CHECK(corpus.documents[0].id == "d1");
  CHECK(corpus.documents[0].topic == "greet");
  CHECK(corpus.documents[0].author == "ann");
  CHECK(corpus.documents[0].split == Split::kUnassigned);
  CHECK(corpus.documents[1].split == Split::kTrain);
}

TEST_CASE("corpus jsonl: malformed lines are located") {
  testing::TempFile file("{\"id\": \"d1\", \"text\": \"x\"}\nnot json\n");
  CHECK_THROWS_WITH(read_corpus_jsonl(file.path()),
                    Catch::Matchers::ContainsSubstring("line 2"));

  testing::TempFile missing("{\"id\": \"d1\"}\n");
  CHECK_THROWS(read_corpus_jsonl(missing.path()));

  testing::TempFile badsplit(R"({"id": "d", "text": "x", "split": "dev"})" "\n");
  CHECK_THROWS_WITH(read_corpus_jsonl(badsplit.path()),
                    Catch::Matchers::ContainsSubstring("split"));
}

TEST_CASE("vector records: round-trip with header line skipped") {
  std::vector<VectorRecord> records(2);
  records[0].id = "a";
  records[0].vector.dim = 4;
  records[0].vector.entries = {{0, 1.5}, {3, 2.0}};
  records[1].id = "b";
  records[1].vector.dim = 4;
  records[1].vector.entries = {{2, 7.0}};
  records[1].n = 7;
  records[1].epsilon = 2.5;

  const json header = {{"seed", 42}};
  testing::TempFile file("", ".jsonl");
  write_vector_records(file.path(), records, &header);

  const std::vector<VectorRecord> loaded = read_vector_records(file.path());
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].id == "a");
  CHECK(loaded[0].vector.dim == 4);
  CHECK(loaded[0].vector.entries == records[0].vector.entries);
  CHECK(!loaded[0].n.has_value());
  REQUIRE(loaded[1].n.has_value());
  CHECK(*loaded[1].n == 7);
  CHECK_THAT(*loaded[1].epsilon, WithinAbs(2.5, 0.0));
}

TEST_CASE("vector records: out-of-range index rejected") {
  testing::TempFile file(R"({"id": "a", "dim": 2, "entries": {"5": 1.0}})" "\n");
  CHECK_THROWS_WITH(read_vector_records(file.path()),
                    Catch::Matchers::ContainsSubstring("out of range"));
}

TEST_CASE("privacy report: JSON round-trip preserves every field") {
  PrivacyReport report;
  report.epsilon = 47.5;
  report.n = 150;
  report.vocab_size = 30000;
  report.standard_loss_per_word = 47.5;
  report.standard_loss_total = 7125.0;
  report.log_eta = -13.4410821274056881;
  report.eta = std::exp(report.log_eta);
  report.improved_loss_per_word = 34.0589178725943119;
  report.improved_loss_total = report.improved_loss_per_word * 150;
  report.tight_loss_per_word = 25.4;
  report.tight_loss_total = 25.4 * 150;
  report.witness = TightLossWitness{12, 77, 4};

  const PrivacyReport parsed = privacy_report_from_json(to_json(report));
  CHECK(parsed.epsilon == report.epsilon);
  CHECK(parsed.n == report.n);
  CHECK(parsed.vocab_size == report.vocab_size);
  CHECK(parsed.standard_loss_total == report.standard_loss_total);
  CHECK(parsed.eta == report.eta);
  CHECK(parsed.log_eta == report.log_eta);
  CHECK(parsed.improved_loss_per_word == report.improved_loss_per_word);
  CHECK(parsed.improved_loss_total == report.improved_loss_total);
  CHECK(parsed.tight_loss_per_word == report.tight_loss_per_word);
  CHECK(parsed.tight_loss_total == report.tight_loss_total);
  CHECK(parsed.witness.v_max == 12);
  CHECK(parsed.witness.v_min == 77);
  CHECK(parsed.witness.w == 4);
}

TEST_CASE("eval report serialization carries stage and scores") {
  EvalReport report;
  report.stage = Stage::kSynthetic;
  report.repetitions = 10;
  report.utility = ClassificationScores{0.6, 0.61, 0.61};
  report.attack = ClassificationScores{0.42, 0.44, 0.43};
  report.beta_utility = 0.87;
  report.beta_attack = 0.66;
  report.gap = 0.21;
  const json obj = to_json(report);
  CHECK(obj.at("stage") == "synthetic");
  CHECK(obj.at("utility").at("f1") == 0.6);
  CHECK(obj.at("gap") == 0.21);
}
