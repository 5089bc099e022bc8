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

// Corpus ingestion and evaluation.
//
// A corpus is JSON Lines, one sample per line:
//
//   {"doc_id": "d1", "source_text": "...", "model_output": "...",
//    "references": [{"question": "...", "answer": "..."}],   // optional
//    "should_reject": false, "category": "summary|reject|normal"}

#ifndef QAFID_HARNESS_H_
#define QAFID_HARNESS_H_

#include <cstddef>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "qafid/errors.h"
#include "qafid/metrics.h"
#include "qafid/qa_parser.h"

namespace qafid {

// Sources longer than this are evaluated in full but flagged.
inline constexpr size_t kLongSourceChars = 65536;

struct Sample {
  std::string doc_id;
  std::string source_text;
  std::string model_output;
  std::optional<std::vector<QAPair>> references;
  bool should_reject = false;
  Category category = Category::kNormal;

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Normalization { kNone, kNfc };

std::string_view NormalizationName(Normalization n);
Normalization ParseNormalization(std::string_view name);

struct EvalConfig {
  size_t min_keep_len = 4;
  bool compat_paper = false;
  bool rouge_vs_source = false;
  std::string refusal_pattern_file;  // empty: built-in defaults
  Normalization normalization = Normalization::kNone;
  size_t worker_count = 1;

  // Throws std::invalid_argument on min_keep_len < 2 or worker_count < 1.
  void Validate() const;
};

// The configured pattern file, or the built-in defaults.
RefusalPatternSet LoadRefusalPatterns(const EvalConfig& config);

// Parses one corpus line. Throws ValidationError naming `line_no`.
Sample ParseSampleLine(std::string_view line, size_t line_no);

std::string SampleToJsonLine(const Sample& sample);

// Streams samples from a JSONL file, one line at a time. Blank lines are
// skipped. Duplicate doc_ids are detected across the whole stream.
class CorpusReader {
 public:
  // Throws IoError if the file cannot be opened.
  explicit CorpusReader(const std::string& path);

  // Next sample, or nullopt at end of file. Throws ValidationError.
  std::optional<Sample> Next();

  size_t line_no() const { return line_no_; }

 private:
  std::string path_;
  std::ifstream in_;
  size_t line_no_ = 0;
  std::unordered_map<std::string, size_t> seen_;  // doc_id -> line
};

std::vector<Sample> LoadCorpus(const std::string& path);

// Never throws for bad sample content; failures land in the status.
SampleMetrics EvaluateSample(const Sample& sample, const EvalConfig& config,
                             const RefusalPatternSet& patterns);

// Evaluates with config.worker_count threads. The result does not depend on
// the worker count or on sample order.
std::vector<SampleMetrics> EvaluateSamples(std::span<const Sample> samples,
                                           const EvalConfig& config,
                                           const RefusalPatternSet& patterns);

CorpusReport EvaluateCorpus(std::span<const Sample> samples,
                            const EvalConfig& config,
                            const RefusalPatternSet& patterns);

struct FileEvaluation {
  CorpusReport report;
  std::vector<SampleMetrics> samples;  // sorted by doc_id
};

// Streams a corpus file in bounded batches, so at most a few samples per
// worker are resident at once. Throws IoError or ValidationError.
FileEvaluation EvaluateCorpusFile(const std::string& path,
                                  const EvalConfig& config,
                                  const RefusalPatternSet& patterns);

// Per-sample diagnostics as one JSON object per line.
std::string SampleMetricsToJsonLine(const SampleMetrics& metrics);

}  // namespace qafid

#endif  // QAFID_HARNESS_H_
