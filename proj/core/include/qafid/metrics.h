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

// Text-fidelity metrics over extraction traces. All percentages are in
// [0, 100].
//
//   COV      single longest copied segment / answer length
//   CCR      answer characters not covered by any kept segment / answer length
//   TEAC     number of kept segments
//   LISR     longest strictly increasing run of source positions, taken in
//            answer order, / number of segments
//   ROUGE-L  character-level longest common subsequence F1
//   REJ      refused reject-labeled documents / reject-labeled documents

#ifndef QAFID_METRICS_H_
#define QAFID_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qafid/lcs.h"
#include "qafid/text.h"

namespace qafid {

// The following throw std::invalid_argument when trace.answer_len == 0.
double CoverageRatio(const ExtractionTrace& trace);
double ContentCreationRate(const ExtractionTrace& trace);

size_t Teac(const ExtractionTrace& trace);

// Throws std::invalid_argument for a trace without segments.
double Lisr(const ExtractionTrace& trace);

// O(k log k) patience sorting.
size_t LongestIncreasingSubsequenceLength(std::span<const int64_t> seq);

struct RougeScore {
  double precision = 0;
  double recall = 0;
  double f = 0;
};

// Length of the longest common subsequence, O(|a|·|b|) time, O(min) space.
size_t LcsSubsequenceLength(std::u32string_view a, std::u32string_view b);

// Character-level ROUGE-L with beta = 1. Throws std::invalid_argument for an
// empty reference.
RougeScore RougeL(const CharSeq& candidate, const CharSeq& reference);

struct RejectObservation {
  bool should_reject = false;
  bool refused = false;
};

struct RejectScore {
  std::optional<double> rej;                 // absent without reject samples
  std::optional<double> false_refusal_rate;  // absent without other samples
};

RejectScore ComputeRejectScore(std::span<const RejectObservation> samples);

enum class Category { kSummary, kReject, kNormal };

std::string_view CategoryName(Category c);
// Throws std::invalid_argument for unknown names.
Category ParseCategory(std::string_view name);

// Every evaluated sample lands in exactly one bucket.
enum class SampleStatus {
  kScored,         // parsed into QA pairs, text metrics computed
  kRefused,        // output matched a refusal pattern
  kMalformed,      // neither pairs nor a refusal could be found
  kRejectedInput,  // the sample itself could not be evaluated
};

std::string_view StatusName(SampleStatus s);

struct TextMetrics {
  double cov = 0;
  double ccr = 0;
  size_t teac = 0;
  std::optional<double> lisr;  // absent iff teac == 0

  friend bool operator==(const TextMetrics&, const TextMetrics&) = default;
};

TextMetrics ComputeTextMetrics(const ExtractionTrace& trace);

struct PairMetrics {
  int index = 0;
  TextMetrics text;

  friend bool operator==(const PairMetrics&, const PairMetrics&) = default;
};

struct SampleMetrics {
  std::string doc_id;
  Category category = Category::kNormal;
  SampleStatus status = SampleStatus::kScored;
  bool refused = false;
  std::optional<TextMetrics> text;   // present iff status == kScored
  std::optional<double> rouge_l_f;   // absent without a ROUGE reference
  std::vector<PairMetrics> pairs;
  bool long_source = false;          // source over the long-source limit
  std::string diagnostic;

  bool should_reject() const { return category == Category::kReject; }
  // A reject-labeled document the model answered instead of refusing.
  bool reject_answered() const {
    return should_reject() && status == SampleStatus::kScored;
  }

  friend bool operator==(const SampleMetrics&, const SampleMetrics&) = default;
};

struct ReportCounts {
  size_t total = 0;
  size_t scored = 0;
  size_t refused = 0;
  size_t malformed = 0;
  size_t rejected_input = 0;
  size_t summary = 0;
  size_t reject = 0;
  size_t normal = 0;
  size_t lisr_eligible = 0;
  size_t rouge_eligible = 0;
  size_t reject_answered = 0;
  size_t long_source = 0;

  friend bool operator==(const ReportCounts&, const ReportCounts&) = default;
};

// Corpus aggregate. COV, CCR and TEAC are averaged over scored samples, LISR
// over scored samples with at least one segment, ROUGE-L over scored samples
// with a reference.
struct CorpusReport {
  std::optional<std::string> label;
  std::optional<double> experts;  // externally supplied human score
  std::optional<double> rej;
  std::optional<double> false_refusal_rate;
  std::optional<double> lisr;
  std::optional<double> teac;  // mean segments per scored sample
  size_t teac_sum = 0;
  std::optional<double> cov;
  std::optional<double> ccr;
  std::optional<double> rouge_l;
  ReportCounts counts;

  friend bool operator==(const CorpusReport&, const CorpusReport&) = default;
};

// Folds samples in doc_id order, so the result does not depend on the order
// of `samples`.
CorpusReport Aggregate(std::span<const SampleMetrics> samples);

}  // namespace qafid

#endif  // QAFID_METRICS_H_
