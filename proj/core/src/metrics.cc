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

#include "qafid/metrics.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qafid {
namespace {

void RequireAnswer(const ExtractionTrace& trace, const char* what) {
  if (trace.answer_len == 0) {
    throw std::invalid_argument(std::string(what) + ": empty answer");
  }
}

double Percent(size_t num, size_t den) {
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

struct Mean {
  double sum = 0;
  size_t count = 0;

  void Add(double v) {
    sum += v;
    ++count;
  }
  std::optional<double> value() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

}  // namespace

double CoverageRatio(const ExtractionTrace& trace) {
  RequireAnswer(trace, "CoverageRatio");
  if (trace.segments.empty()) return 0.0;
  return Percent(trace.segments.front().text.size(), trace.answer_len);
}

double ContentCreationRate(const ExtractionTrace& trace) {
  RequireAnswer(trace, "ContentCreationRate");
  const size_t covered = trace.covered_len();
  if (covered > trace.answer_len) {
    throw std::logic_error("trace covers more than the answer");
  }
  return Percent(trace.answer_len - covered, trace.answer_len);
}

size_t Teac(const ExtractionTrace& trace) { return trace.segments.size(); }

double Lisr(const ExtractionTrace& trace) {
  if (trace.segments.empty()) {
    throw std::invalid_argument("Lisr: trace has no segments");
  }
  std::vector<const Segment*> by_answer;
  by_answer.reserve(trace.segments.size());
  for (const Segment& seg : trace.segments) by_answer.push_back(&seg);
  std::stable_sort(by_answer.begin(), by_answer.end(),
                   [](const Segment* l, const Segment* r) {
                     return l->answer_span.start < r->answer_span.start;
                   });
  std::vector<int64_t> starts;
  starts.reserve(by_answer.size());
  for (const Segment* seg : by_answer) {
    starts.push_back(static_cast<int64_t>(seg->source_span.start));
  }
  return Percent(LongestIncreasingSubsequenceLength(starts), starts.size());
}

size_t LongestIncreasingSubsequenceLength(std::span<const int64_t> seq) {
  // tails[k] is the smallest tail of a strictly increasing run of length k+1.
  std::vector<int64_t> tails;
  for (int64_t v : seq) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) {
      tails.push_back(v);
    } else {
      *it = v;
    }
  }
  return tails.size();
}

size_t LcsSubsequenceLength(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  std::vector<uint32_t> row(b.size() + 1, 0);
  for (CodePoint ca : a) {
    uint32_t diag = 0;  // row[j-1] of the previous row
    for (size_t j = 1; j <= b.size(); ++j) {
      const uint32_t up = row[j];
      row[j] = ca == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

RougeScore RougeL(const CharSeq& candidate, const CharSeq& reference) {
  if (reference.empty()) {
    throw std::invalid_argument("RougeL: empty reference");
  }
  if (candidate.empty()) return {};
  const size_t lcs = LcsSubsequenceLength(candidate.view(), reference.view());
  RougeScore score;
  score.precision = Percent(lcs, candidate.size());
  score.recall = Percent(lcs, reference.size());
  if (lcs > 0) {
    score.f = 2.0 * score.precision * score.recall /
              (score.precision + score.recall);
  }
  return score;
}

RejectScore ComputeRejectScore(std::span<const RejectObservation> samples) {
  size_t reject_total = 0, reject_refused = 0;
  size_t other_total = 0, other_refused = 0;
  for (const RejectObservation& s : samples) {
    if (s.should_reject) {
      ++reject_total;
      if (s.refused) ++reject_refused;
    } else {
      ++other_total;
      if (s.refused) ++other_refused;
    }
  }
  RejectScore score;
  if (reject_total > 0) score.rej = Percent(reject_refused, reject_total);
  if (other_total > 0) {
    score.false_refusal_rate = Percent(other_refused, other_total);
  }
  return score;
}

std::string_view CategoryName(Category c) {
  switch (c) {
    case Category::kSummary:
      return "summary";
    case Category::kReject:
      return "reject";
    case Category::kNormal:
      return "normal";
  }
  return "normal";
}

Category ParseCategory(std::string_view name) {
  if (name == "summary") return Category::kSummary;
  if (name == "reject") return Category::kReject;
  if (name == "normal") return Category::kNormal;
  throw std::invalid_argument("unknown category '" + std::string(name) + "'");
}

std::string_view StatusName(SampleStatus s) {
  switch (s) {
    case SampleStatus::kScored:
      return "scored";
    case SampleStatus::kRefused:
      return "refused";
    case SampleStatus::kMalformed:
      return "malformed";
    case SampleStatus::kRejectedInput:
      return "rejected_input";
  }
  return "rejected_input";
}

TextMetrics ComputeTextMetrics(const ExtractionTrace& trace) {
  TextMetrics m;
  m.cov = CoverageRatio(trace);
  m.ccr = ContentCreationRate(trace);
  m.teac = Teac(trace);
  if (m.teac > 0) m.lisr = Lisr(trace);
  return m;
}

CorpusReport Aggregate(std::span<const SampleMetrics> samples) {
  std::vector<size_t> order(samples.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t l, size_t r) {
    return samples[l].doc_id < samples[r].doc_id;
  });

  CorpusReport report;
  ReportCounts& c = report.counts;
  Mean cov, ccr, teac, lisr, rouge;
  std::vector<RejectObservation> observations;
  observations.reserve(samples.size());

  for (size_t idx : order) {
    const SampleMetrics& s = samples[idx];
    ++c.total;
    switch (s.category) {
      case Category::kSummary: ++c.summary; break;
      case Category::kReject: ++c.reject; break;
      case Category::kNormal: ++c.normal; break;
    }
    switch (s.status) {
      case SampleStatus::kScored: ++c.scored; break;
      case SampleStatus::kRefused: ++c.refused; break;
      case SampleStatus::kMalformed: ++c.malformed; break;
      case SampleStatus::kRejectedInput: ++c.rejected_input; break;
    }
    if (s.long_source) ++c.long_source;
    if (s.reject_answered()) ++c.reject_answered;
    if (s.status != SampleStatus::kRejectedInput) {
      observations.push_back({s.should_reject(), s.refused});
    }

    if (s.status != SampleStatus::kScored || !s.text) continue;
    cov.Add(s.text->cov);
    ccr.Add(s.text->ccr);
    teac.Add(static_cast<double>(s.text->teac));
    report.teac_sum += s.text->teac;
    if (s.text->lisr) lisr.Add(*s.text->lisr);
    if (s.rouge_l_f) rouge.Add(*s.rouge_l_f);
  }

  const RejectScore rej = ComputeRejectScore(observations);
  report.rej = rej.rej;
  report.false_refusal_rate = rej.false_refusal_rate;
  report.cov = cov.value();
  report.ccr = ccr.value();
  report.teac = teac.value();
  report.lisr = lisr.value();
  report.rouge_l = rouge.value();
  c.lisr_eligible = lisr.count;
  c.rouge_eligible = rouge.count;
  return report;
}

}  // namespace qafid
