// Copyright 2026 The qafid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qafid/harness.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.h"
#include "qafid/report.h"

namespace qafid {
namespace {

const std::string kData = QAFID_TEST_DATA_DIR;

std::string WriteTemp(const std::string& name, const std::string& content) {
  std::string path =
      (std::filesystem::temp_directory_path() / ("qafid_harness_" + name))
          .string();
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

Sample Make(std::string id, std::string source, std::string output,
            Category category) {
  Sample s;
  s.doc_id = std::move(id);
  s.source_text = std::move(source);
  s.model_output = std::move(output);
  s.category = category;
  s.should_reject = category == Category::kReject;
  return s;
}

std::vector<Sample> ThreeSamples() {
  return {
      Make("a", "ABCDEFGHIJKLMNOP", "1：\n问题：Q\n答案：MNOPABCDE",
           Category::kSummary),
      Make("b", "特征描述 未予评估",
           oracle::ReadFile(kData + "/apology_refusal.txt"), Category::kReject),
      Make("c", "ABCDEFGHIJ", "1：\n问题：Q\n答案：ABCDEFGHIJ",
           Category::kNormal),
  };
}

TEST(ParseSampleLineTest, SchemaInstance) {
  Sample s = ParseSampleLine(
      R"({"doc_id":"d1","source_text":"ABCDEFGH","model_output":"1：\n问题：Q\n答案：ABCD","should_reject":false,"category":"normal"})",
      1);
  EXPECT_EQ(s.doc_id, "d1");
  EXPECT_EQ(s.category, Category::kNormal);
  EXPECT_FALSE(s.references);
  EXPECT_EQ(ParseSampleLine(SampleToJsonLine(s), 1), s);
}

TEST(ParseSampleLineTest, Errors) {
  EXPECT_THROW(ParseSampleLine("{", 3), ValidationError);
  EXPECT_THROW(
      ParseSampleLine(
          R"({"doc_id":"d","source_text":"","model_output":"","should_reject":false,"category":"poem"})",
          1),
      ValidationError);
  EXPECT_THROW(
      ParseSampleLine(
          R"({"doc_id":"d","source_text":"","model_output":"","should_reject":true,"category":"summary"})",
          1),
      ValidationError);
  try {
    ParseSampleLine(R"({"doc_id":"d"})", 7);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos);
  }
}

TEST(LoadCorpusTest, DuplicateIdsNameBothLines) {
  Sample s = Make("dup", "x", "y", Category::kNormal);
  std::string path = WriteTemp(
      "dup.jsonl", SampleToJsonLine(s) + "\n\n" + SampleToJsonLine(s) + "\n");
  try {
    LoadCorpus(path);
    FAIL();
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("lines 1 and 3"), std::string::npos) << msg;
  }
  std::filesystem::remove(path);
  EXPECT_THROW(LoadCorpus("/nonexistent/corpus.jsonl"), IoError);
}

TEST(EvaluateSampleTest, Examples) {
  EvalConfig config;
  const RefusalPatternSet& patterns = RefusalPatternSet::Default();
  std::vector<Sample> samples = ThreeSamples();

  SampleMetrics a = EvaluateSample(samples[0], config, patterns);
  ASSERT_EQ(a.status, SampleStatus::kScored);
  EXPECT_NEAR(a.text->cov, 55.56, 0.01);
  EXPECT_EQ(a.text->ccr, 0.0);
  EXPECT_EQ(a.text->teac, 2u);
  EXPECT_EQ(a.text->lisr, 50.0);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0].text, *a.text);

  SampleMetrics b = EvaluateSample(samples[1], config, patterns);
  EXPECT_EQ(b.status, SampleStatus::kRefused);
  EXPECT_TRUE(b.refused);
  EXPECT_FALSE(b.text);

  SampleMetrics c = EvaluateSample(samples[2], config, patterns);
  EXPECT_EQ(c.text, (TextMetrics{100, 0, 1, 100.0}));
}

TEST(EvaluateSampleTest, FailuresLandInStatus) {
  EvalConfig config;
  const RefusalPatternSet& patterns = RefusalPatternSet::Default();
  EXPECT_EQ(EvaluateSample(Make("m", "src", "hello", Category::kSummary),
                           config, patterns)
                .status,
            SampleStatus::kMalformed);
  EXPECT_EQ(EvaluateSample(Make("e", "", "问题：Q\n答案：A", Category::kSummary),
                           config, patterns)
                .status,
            SampleStatus::kRejectedInput);
  EXPECT_EQ(EvaluateSample(Make("u", "\xff", "问题：Q\n答案：A",
                                Category::kSummary),
                           config, patterns)
                .status,
            SampleStatus::kRejectedInput);
}

TEST(EvaluateSampleTest, RougeAgainstReferencesOrSource) {
  Sample s = Make("r", "ABCDEFGH", "问题：Q\n答案：ABCD", Category::kNormal);
  EvalConfig config;
  const RefusalPatternSet& patterns = RefusalPatternSet::Default();
  EXPECT_FALSE(EvaluateSample(s, config, patterns).rouge_l_f);
  s.references = std::vector<QAPair>{{1, "Q", "ACBD"}};
  EXPECT_DOUBLE_EQ(*EvaluateSample(s, config, patterns).rouge_l_f, 75.0);
  config.rouge_vs_source = true;
  EXPECT_NEAR(*EvaluateSample(s, config, patterns).rouge_l_f, 200.0 / 3.0,
              1e-9);
}

TEST(EvaluateCorpusTest, HandAggregation) {
  std::vector<Sample> samples = ThreeSamples();
  CorpusReport r = EvaluateCorpus(samples, {}, RefusalPatternSet::Default());
  EXPECT_NEAR(*r.cov, (500.0 / 9.0 + 100.0) / 2.0, 1e-9);
  EXPECT_DOUBLE_EQ(*r.ccr, 0.0);
  EXPECT_DOUBLE_EQ(*r.teac, 1.5);
  EXPECT_DOUBLE_EQ(*r.lisr, 75.0);
  EXPECT_DOUBLE_EQ(*r.rej, 100.0);
  EXPECT_DOUBLE_EQ(*r.false_refusal_rate, 0.0);
  EXPECT_EQ(r.counts.total, 3u);
}

TEST(EvaluateCorpusTest, AllRefusedRejectCorpus) {
  std::string refusal = oracle::ReadFile(kData + "/apology_refusal.txt");
  std::vector<Sample> samples = {Make("x", "s", refusal, Category::kReject),
                                 Make("y", "s", refusal, Category::kReject)};
  CorpusReport r = EvaluateCorpus(samples, {}, RefusalPatternSet::Default());
  EXPECT_DOUBLE_EQ(*r.rej, 100.0);
  EXPECT_FALSE(r.cov || r.ccr || r.teac || r.lisr);
}

TEST(EvaluateCorpusTest, WorkersAndOrderDoNotMatter) {
  std::mt19937_64 rng(47);
  std::vector<Sample> samples;
  for (int i = 0; i < 60; ++i) {
    std::u32string src = oracle::RandomText(rng, 4, 200);
    std::u32string ans = src.substr(0, src.size() / 3) +
                         oracle::RandomText(rng, 4, 20);
    samples.push_back(Make("s" + std::to_string(i), EncodeUtf8(src),
                           "问题：Q\n答案：" + EncodeUtf8(ans),
                           Category::kSummary));
  }
  const RefusalPatternSet& patterns = RefusalPatternSet::Default();
  std::string want = ReportToJson(EvaluateCorpus(samples, {}, patterns));
  for (size_t workers : {2u, 3u, 8u}) {
    std::shuffle(samples.begin(), samples.end(), rng);
    EvalConfig config;
    config.worker_count = workers;
    ASSERT_EQ(ReportToJson(EvaluateCorpus(samples, config, patterns)), want);
  }
}

TEST(EvaluateCorpusFileTest, StreamsInBatches) {
  std::vector<Sample> samples = ThreeSamples();
  std::string content;
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
    content += SampleToJsonLine(*it) + "\n";
  }
  std::string path = WriteTemp("corpus.jsonl", content);
  EvalConfig config;
  config.worker_count = 1;  // batches of 4 but still one pass
  FileEvaluation fe =
      EvaluateCorpusFile(path, config, RefusalPatternSet::Default());
  std::filesystem::remove(path);
  ASSERT_EQ(fe.samples.size(), 3u);
  EXPECT_EQ(fe.samples[0].doc_id, "a");
  EXPECT_EQ(fe.report,
            EvaluateCorpus(samples, {}, RefusalPatternSet::Default()));
}

TEST(EvalConfigTest, Validate) {
  EvalConfig config;
  config.min_keep_len = 1;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config.min_keep_len = 4;
  config.worker_count = 0;
  EXPECT_THROW(config.Validate(), std::invalid_argument);
}

}  // namespace
}  // namespace qafid
