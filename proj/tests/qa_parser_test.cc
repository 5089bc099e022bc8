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

#include "qafid/qa_parser.h"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "oracles.h"
#include "qafid/errors.h"

namespace qafid {
namespace {

const std::string kData = QAFID_TEST_DATA_DIR;

std::vector<QAPair> Pairs(const ParsedOutput& out) {
  const auto* p = std::get_if<ParsedPairs>(&out);
  if (p == nullptr) {
    ADD_FAILURE() << "expected pairs, got variant " << out.index();
    return {};
  }
  return p->pairs;
}

TEST(ParseOutputTest, WorkedExampleYieldsFivePairs) {
  std::string text = oracle::ReadFile(kData + "/mental_model_output.txt");
  std::vector<QAPair> pairs =
      Pairs(ParseOutput(text, RefusalPatternSet::Default()));
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[0].index, 1);
  EXPECT_EQ(pairs[0].question, "什么是心智模型？");
  EXPECT_EQ(pairs[0].answer.rfind("心智模型是对某人关于某事", 0), 0u);
  for (size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_EQ(pairs[i].index, static_cast<int>(i) + 1);
  }
  // The last block carries its answer on the question line.
  EXPECT_EQ(pairs[4].question, "在心理学中，心智模型有哪些不同的含义？");
  EXPECT_EQ(pairs[4].answer.rfind("在心理学中，术语", 0), 0u);
}

TEST(ParseOutputTest, RefusalWins) {
  std::string text = oracle::ReadFile(kData + "/apology_refusal.txt");
  ParsedOutput out = ParseOutput(text, RefusalPatternSet::Default());
  ASSERT_TRUE(std::holds_alternative<Refusal>(out));
  EXPECT_NE(std::get<Refusal>(out).matched.find("对不起"), std::string::npos);
}

TEST(ParseOutputTest, NoMarkersIsMalformed) {
  ParsedOutput out = ParseOutput("hello world", RefusalPatternSet::Default());
  ASSERT_TRUE(std::holds_alternative<Malformed>(out));
  EXPECT_EQ(std::get<Malformed>(out).line, 1u);
}

TEST(ParseOutputTest, AsciiColonsAndMultilineAnswers) {
  std::vector<QAPair> pairs = Pairs(ParseOutput(
      "1:\n问题:Q1\n答案:first\nsecond\n\n2:\n问题:Q2\n答案:A2",
      RefusalPatternSet::Default()));
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].answer, "first\nsecond");
  EXPECT_EQ(pairs[1], (QAPair{2, "Q2", "A2"}));
}

TEST(ParseOutputTest, IncompleteBlocksAreDropped) {
  ParsedOutput out = ParseOutput("1：\n问题：Q1\n2：\n问题：Q2\n答案：A2",
                                 RefusalPatternSet::Default());
  ASSERT_TRUE(std::holds_alternative<ParsedPairs>(out));
  const ParsedPairs& p = std::get<ParsedPairs>(out);
  EXPECT_EQ(p.dropped_blocks, 1u);
  ASSERT_EQ(p.pairs.size(), 1u);
  EXPECT_EQ(p.pairs[0], (QAPair{2, "Q2", "A2"}));
}

TEST(ParseOutputTest, NonIncreasingIndicesAreRenumbered) {
  std::vector<QAPair> pairs = Pairs(
      ParseOutput("3：\n问题：a\n答案：b\n3：\n问题：c\n答案：d\n问题：e\n答案：f",
                  RefusalPatternSet::Default()));
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0].index, 3);
  EXPECT_EQ(pairs[1].index, 4);
  EXPECT_EQ(pairs[2].index, 5);
}

TEST(ParseOutputTest, EmptyPatternSetSkipsRefusalCheck) {
  std::string text = oracle::ReadFile(kData + "/apology_refusal.txt");
  EXPECT_TRUE(
      std::holds_alternative<Malformed>(ParseOutput(text, RefusalPatternSet())));
}

TEST(ParseOutputTest, CanonicalRenderingRoundTrips) {
  std::mt19937_64 rng(41);
  const std::vector<std::string> words = {"心智", "模型", "QA", "抽取", "x y",
                                          "。", "1943年", "？"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<QAPair> pairs;
    int index = 0;
    for (size_t n = 1 + rng() % 6; n > 0; --n) {
      QAPair p;
      index += 1 + static_cast<int>(rng() % 3);
      p.index = index;
      for (size_t w = 1 + rng() % 4; w > 0; --w) p.question += words[rng() % words.size()];
      for (size_t w = 1 + rng() % 8; w > 0; --w) p.answer += words[rng() % words.size()];
      pairs.push_back(std::move(p));
    }
    ASSERT_EQ(Pairs(ParseOutput(RenderPairs(pairs), RefusalPatternSet())),
              pairs);
  }
}

TEST(ConcatenateAnswersTest, NoSeparator) {
  std::vector<QAPair> pairs = {{1, "q", "AB"}, {2, "q", "CD"}};
  EXPECT_EQ(ConcatenateAnswers(pairs), "ABCD");
}

TEST(RefusalPatternSetTest, ShippedFileMatchesBuiltIn) {
  RefusalPatternSet file =
      RefusalPatternSet::FromFile(std::string(QAFID_SOURCE_DATA_DIR) +
                                  "/refusal_patterns.txt");
  const RefusalPatternSet& builtin = RefusalPatternSet::Default();
  ASSERT_EQ(file.size(), builtin.size());
  for (size_t i = 0; i < file.size(); ++i) {
    EXPECT_EQ(file[i].text, builtin[i].text);
    EXPECT_EQ(file[i].kind, builtin[i].kind);
  }
}

TEST(RefusalPatternSetTest, ParseAndMatch) {
  RefusalPatternSet set =
      RefusalPatternSet::Parse("# comment\n\nsorry\nre:^no\\b\n");
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set[0].kind, RefusalPattern::Kind::kLiteral);
  EXPECT_EQ(set[1].kind, RefusalPattern::Kind::kRegex);
  EXPECT_EQ(set.Match("no way")->pattern_id, 1u);
  EXPECT_EQ(set.Match("so sorry")->matched, "sorry");
  EXPECT_FALSE(set.Match("fine"));
  EXPECT_THROW(RefusalPatternSet::Parse("re:(unclosed"), std::invalid_argument);
  EXPECT_THROW(RefusalPatternSet::FromFile("/nonexistent/patterns"), IoError);
}

TEST(DetectRefusalTest, Examples) {
  std::string refusal = oracle::ReadFile(kData + "/apology_refusal.txt");
  EXPECT_TRUE(DetectRefusal(refusal, RefusalPatternSet::Default()));
  EXPECT_FALSE(DetectRefusal("1：\n问题：Q\n答案：A",
                             RefusalPatternSet::Default()));
  EXPECT_FALSE(DetectRefusal("", RefusalPatternSet::Default()));
  EXPECT_THROW(DetectRefusal("x", RefusalPatternSet()), std::invalid_argument);
}

}  // namespace
}  // namespace qafid
