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

#include "cli.h"

#include <gtest/gtest.h>
#include <stdlib.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "oracles.h"
#include "qafid/harness.h"
#include "qafid/vocab.h"

namespace qafid::cli {
namespace {

using nlohmann::json;

const std::string kData = QAFID_TEST_DATA_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("qafid_cli_" + std::string(::testing::UnitTest::GetInstance()
                                           ->current_test_info()
                                           ->name()));
    std::filesystem::create_directories(dir_);
    unsetenv(kConfigEnvVar);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::string Write(const std::string& name, const std::string& content) {
    std::ofstream(Path(name), std::ios::binary) << content;
    return Path(name);
  }
  int Call(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::Run(args, out_, err_);
  }
  std::string Corpus() {
    Sample s;
    s.doc_id = "a";
    s.source_text = "ABCDEFGHIJKLMNOP";
    s.model_output = "1：\n问题：Q\n答案：MNOPABCDE";
    s.category = Category::kSummary;
    Sample r;
    r.doc_id = "b";
    r.source_text = "x";
    r.model_output = oracle::ReadFile(kData + "/apology_refusal.txt");
    r.category = Category::kReject;
    r.should_reject = true;
    return Write("corpus.jsonl",
                 SampleToJsonLine(s) + "\n" + SampleToJsonLine(r) + "\n");
  }

  std::filesystem::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, EvalMarkdownToStdout) {
  ASSERT_EQ(Call({"eval", "--corpus", Corpus()}), kExitOk) << err_.str();
  EXPECT_EQ(out_.str(),
            "| EXPERTS | REJ | LISR | TEAC | COV | CCR | ROUGE-L |\n"
            "| ---: | ---: | ---: | ---: | ---: | ---: | ---: |\n"
            "|  | 100.00 | 50.00 | 2 | 55.56 | 0.00 |  |\n");
}

TEST_F(CliTest, EvalJsonPerSampleAndOutFile) {
  std::string corpus = Corpus();
  ASSERT_EQ(Call({"eval", "--corpus", corpus, "--format", "json", "--out",
                  Path("r.json"), "--per-sample", Path("s.jsonl"),
                  "--workers", "3", "--label", "m", "--experts", "97"}),
            kExitOk)
      << err_.str();
  json report = json::parse(oracle::ReadFile(Path("r.json")));
  EXPECT_EQ(report["label"], "m");
  EXPECT_EQ(report["experts"], 97.0);
  EXPECT_EQ(report["counts"]["total"], 2);
  std::istringstream lines(oracle::ReadFile(Path("s.jsonl")));
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(json::parse(line)["doc_id"], "a");
  std::getline(lines, line);
  EXPECT_EQ(json::parse(line)["status"], "refused");
}

TEST_F(CliTest, EvalErrors) {
  EXPECT_EQ(Call({"eval", "--corpus", Path("missing.jsonl")}), kExitIo);
  EXPECT_NE(err_.str().find("missing.jsonl"), std::string::npos);
  EXPECT_EQ(Call({"eval", "--corpus", Write("bad.jsonl", "{nope}\n")}),
            kExitValidation);
  EXPECT_NE(err_.str().find("line 1"), std::string::npos);
  EXPECT_EQ(Call({"eval"}), kExitValidation);
  EXPECT_EQ(Call({"eval", "--corpus", Corpus(), "--format", "xml"}),
            kExitValidation);
  EXPECT_EQ(Call({"eval", "--corpus", Corpus(), "--min-keep-len", "1"}),
            kExitValidation);
  EXPECT_EQ(Call({"eval", "--corpus", Corpus(), "--workers", "-2"}),
            kExitValidation);
  EXPECT_EQ(Call({"eval", "--bogus"}), kExitValidation);
}

TEST_F(CliTest, ConfigPrecedence) {
  std::string cfg = Write("c.conf", "# settings\nmin-keep-len=6\nworkers=2\n");
  ASSERT_EQ(Call({"eval", "--config", cfg, "--workers", "5", "--show-config"}),
            kExitOk);
  std::string shown = out_.str();
  EXPECT_NE(shown.find("min_keep_len=6  # config"), std::string::npos);
  EXPECT_NE(shown.find("workers=5  # flag"), std::string::npos);
  EXPECT_NE(shown.find("format=markdown  # default"), std::string::npos);

  setenv(kConfigEnvVar, cfg.c_str(), 1);
  ASSERT_EQ(Call({"eval", "--show-config"}), kExitOk);
  EXPECT_NE(out_.str().find("workers=2  # config"), std::string::npos);
  unsetenv(kConfigEnvVar);

  EXPECT_EQ(Call({"eval", "--config", Write("bad.conf", "colour=red\n"),
                  "--show-config"}),
            kExitValidation);
}

TEST_F(CliTest, ParseConfigText) {
  auto values = ParseConfigText("min-keep-len = 5\n\n# x\nformat=json\n");
  EXPECT_EQ(values.at("min_keep_len"), "5");
  EXPECT_EQ(values.at("format"), "json");
  EXPECT_THROW(ParseConfigText("min-keep-len=4\nnoequals"),
               std::invalid_argument);
  EXPECT_THROW(ParseConfigText("a-b=1"), std::invalid_argument);
}

TEST_F(CliTest, TraceTwoSegments) {
  std::string src = Write("src.txt", "ABCDEFGHIJKLMNOP\n");
  std::string ans = Write("ans.txt", "MNOPABCDE\n");
  ASSERT_EQ(Call({"trace", src, ans}), kExitOk) << err_.str();
  json t = json::parse(out_.str());
  ASSERT_EQ(t["segments"].size(), 2u);
  EXPECT_EQ(t["segments"][0]["text"], "ABCDE");
  EXPECT_EQ(t["source_bounds"], json::parse("[0,16]"));
  EXPECT_EQ(t["metrics"]["teac"], 2);

  ASSERT_EQ(Call({"trace", "--source", src, "--answer", src}), kExitOk);
  json same = json::parse(out_.str());
  ASSERT_EQ(same["segments"].size(), 1u);
  EXPECT_EQ(same["metrics"]["cov"], 100.0);
}

TEST_F(CliTest, ParseSubcommand) {
  ASSERT_EQ(Call({"parse", kData + "/mental_model_output.txt"}), kExitOk);
  EXPECT_EQ(json::parse(out_.str())["pairs"].size(), 5u);
  ASSERT_EQ(Call({"parse", "--input", kData + "/apology_refusal.txt"}), kExitOk);
  EXPECT_TRUE(json::parse(out_.str()).contains("refusal"));
  std::string junk = Write("junk.txt", "hello world\n");
  ASSERT_EQ(Call({"parse", junk}), kExitOk);
  EXPECT_EQ(json::parse(out_.str())["malformed"]["line"], 1);
  EXPECT_EQ(Call({"parse", junk, "--strict"}), kExitValidation);
}

TEST_F(CliTest, ExtendVocab) {
  Vocabulary({"a", "b"}).Save(Path("base.txt"));
  EmbeddingMatrix(2, 2, {1, 0, 0, 1}).Save(Path("base.emb"));
  Write("new.txt", "ab\nb\n");
  ASSERT_EQ(Call({"extend-vocab", "--base-vocab", Path("base.txt"),
                  "--base-matrix", Path("base.emb"), "--new-tokens",
                  Path("new.txt"), "--out-vocab", Path("out.txt"),
                  "--out-matrix", Path("out.emb")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(Vocabulary::Load(Path("out.txt")).size(), 3u);
  EmbeddingMatrix m = EmbeddingMatrix::Load(Path("out.emb"));
  EXPECT_EQ(m.row(2)[0], 0.5f);
  EXPECT_EQ(m.row(2)[1], 0.5f);

  Write("new2.txt", "ax\n");
  EXPECT_EQ(Call({"extend-vocab", "--base-vocab", Path("base.txt"),
                  "--base-matrix", Path("base.emb"), "--new-tokens",
                  Path("new2.txt"), "--out-vocab", Path("o2.txt"),
                  "--out-matrix", Path("o2.emb")}),
            kExitValidation);
}

TEST_F(CliTest, HelpListsEveryFlag) {
  ASSERT_EQ(Call({"--help"}), kExitOk);
  const std::string help = out_.str();
  for (const char* flag :
       {"--corpus", "--format", "--min-keep-len", "--compat-paper",
        "--rouge-vs-source", "--refusal-patterns", "--workers",
        "--normalization", "--per-sample", "--strict", "--base-vocab",
        "--mode", "--seed", "--randomize-existing-cjk", "--config"}) {
    EXPECT_NE(help.find(flag), std::string::npos) << flag;
  }
}

}  // namespace
}  // namespace qafid::cli
