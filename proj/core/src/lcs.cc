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

#include "qafid/lcs.h"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace qafid {
namespace {

constexpr CodePoint kCompatSentinel = U'*';

bool WindowUnblanked(const MaskableText& t, size_t start, size_t end) {
  for (size_t k = start; k < end; ++k) {
    if (t.blanked(k)) return false;
  }
  return true;
}

void ExtendBounds(std::optional<Span>& bounds, Span span) {
  if (!bounds) {
    bounds = span;
  } else {
    bounds->start = std::min(bounds->start, span.start);
    bounds->end = std::max(bounds->end, span.end);
  }
}

// Non-overlapping left-to-right replacement of every occurrence.
std::u32string ReplaceAll(const std::u32string& text, std::u32string_view from,
                          std::u32string_view to) {
  std::u32string out;
  out.reserve(text.size());
  size_t pos = 0;
  for (;;) {
    const size_t hit = text.find(from, pos);
    if (hit == std::u32string::npos) break;
    out.append(text, pos, hit - pos);
    out.append(to);
    pos = hit + from.size();
  }
  out.append(text, pos, std::u32string::npos);
  return out;
}

ExtractionTrace ExtractMasked(const CharSeq& source, const CharSeq& answer,
                              size_t min_keep_len) {
  ExtractionTrace trace;
  trace.source_len = source.size();
  trace.answer_len = answer.size();

  MaskableText src(source);
  MaskableText ans(answer);
  for (size_t order = 0;; ++order) {
    std::optional<CommonSubstring> lcs = LongestCommonSubstring(src, ans);
    if (!lcs || lcs->length() < min_keep_len) break;
    const size_t len = lcs->length();
    Segment seg;
    seg.source_span = {lcs->end_in_a - len, lcs->end_in_a};
    seg.answer_span = {lcs->end_in_b - len, lcs->end_in_b};
    seg.order = order;
    seg.text = std::move(lcs->text);
    src.Blank(seg.source_span.start, seg.source_span.end);
    ans.Blank(seg.answer_span.start, seg.answer_span.end);
    ExtendBounds(trace.source_bounds, seg.source_span);
    trace.segments.push_back(std::move(seg));
  }
  return trace;
}

ExtractionTrace ExtractCompat(const CharSeq& source, const CharSeq& answer,
                              size_t min_keep_len) {
  ExtractionTrace trace;
  trace.source_len = source.size();
  trace.answer_len = answer.size();

  const std::u32string sentinel(1, kCompatSentinel);
  std::u32string src = source.cells();
  std::u32string ans = answer.cells();
  for (size_t order = 0;; ++order) {
    std::optional<CommonSubstring> lcs = LongestCommonSubstring(
        MaskableText::WithSentinel(CharSeq(src), kCompatSentinel),
        MaskableText::WithSentinel(CharSeq(ans), kCompatSentinel));
    // The original loop breaks on len <= N with N = min_keep_len - 1.
    if (!lcs || lcs->length() <= min_keep_len - 1) break;

    // Non-sentinel runs of the rewritten strings are substrings of the
    // originals, so both lookups succeed.
    std::optional<Span> in_source = FindSubstringPositions(lcs->text, source);
    std::optional<Span> in_answer = FindSubstringPositions(lcs->text, answer);
    if (!in_source || !in_answer) {
      throw std::logic_error("compat extraction lost a substring");
    }
    src = ReplaceAll(src, lcs->text.view(), sentinel);
    ans = ReplaceAll(ans, lcs->text.view(), sentinel);

    Segment seg;
    seg.source_span = *in_source;
    seg.answer_span = *in_answer;
    seg.order = order;
    seg.text = std::move(lcs->text);
    ExtendBounds(trace.source_bounds, seg.source_span);
    trace.segments.push_back(std::move(seg));
  }
  return trace;
}

}  // namespace

std::optional<CommonSubstring> LongestCommonSubstring(const MaskableText& a,
                                                      const MaskableText& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  if (n == 0 || m == 0) return std::nullopt;
  if (n >= std::numeric_limits<uint32_t>::max()) {
    throw std::length_error("LongestCommonSubstring: input too long");
  }

  // Unblanked positions of each code point in b, in descending order. Walking
  // a row right-to-left lets a single array hold both the previous and the
  // current DP row: cell j reads j-1 before row i overwrites it.
  std::unordered_map<CodePoint, std::vector<uint32_t>> positions;
  for (size_t j = m; j-- > 0;) {
    if (!b.blanked(j)) positions[b.base()[j]].push_back(static_cast<uint32_t>(j));
  }

  std::vector<uint32_t> run(m, 0);
  std::vector<uint32_t> stamp(m, 0);  // row index + 1 that last wrote run[j]

  uint32_t best_len = 0;
  size_t best_end_a = 0;
  size_t best_end_b = 0;
  for (size_t i = 0; i < n; ++i) {
    if (a.blanked(i)) continue;
    auto it = positions.find(a.base()[i]);
    if (it == positions.end()) continue;
    const auto row = static_cast<uint32_t>(i);
    for (uint32_t j : it->second) {
      const uint32_t prev = (j > 0 && stamp[j - 1] == row) ? run[j - 1] : 0;
      const uint32_t len = prev + 1;
      run[j] = len;
      stamp[j] = row + 1;
      if (len > best_len || (len == best_len && i + 1 == best_end_a &&
                             j + 1 < best_end_b)) {
        best_len = len;
        best_end_a = i + 1;
        best_end_b = j + 1;
      }
    }
  }
  if (best_len == 0) return std::nullopt;
  return CommonSubstring{a.base().Slice(best_end_a - best_len, best_end_a),
                         best_end_a, best_end_b};
}

std::optional<CommonSubstring> LongestCommonSubstringBruteForce(
    const MaskableText& a, const MaskableText& b) {
  const size_t n = a.size();
  const size_t m = b.size();
  if (n > kBruteForceMaxLength || m > kBruteForceMaxLength) {
    throw std::length_error("LongestCommonSubstringBruteForce: inputs over " +
                            std::to_string(kBruteForceMaxLength) + " cells");
  }
  for (size_t len = std::min(n, m); len >= 1; --len) {
    for (size_t end_a = len; end_a <= n; ++end_a) {
      if (!WindowUnblanked(a, end_a - len, end_a)) continue;
      for (size_t end_b = len; end_b <= m; ++end_b) {
        if (!WindowUnblanked(b, end_b - len, end_b)) continue;
        bool equal = true;
        for (size_t k = 0; k < len && equal; ++k) {
          equal = a.base()[end_a - len + k] == b.base()[end_b - len + k];
        }
        if (equal) {
          return CommonSubstring{a.base().Slice(end_a - len, end_a), end_a,
                                 end_b};
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Span> FindSubstringPositions(const CharSeq& needle,
                                           const CharSeq& haystack) {
  if (needle.empty()) {
    throw std::invalid_argument("FindSubstringPositions: empty needle");
  }
  const size_t pos = haystack.view().find(needle.view());
  if (pos == std::u32string_view::npos) return std::nullopt;
  return Span{pos, pos + needle.size()};
}

size_t ExtractionTrace::covered_len() const {
  size_t total = 0;
  for (const Segment& seg : segments) total += seg.text.size();
  return total;
}

ExtractionTrace IterativeExtract(const CharSeq& source, const CharSeq& answer,
                                 const ExtractionConfig& config) {
  if (config.min_keep_len < 1) {
    throw std::invalid_argument("min_keep_len must be at least 1");
  }
  if (config.compat_paper) {
    if (config.min_keep_len < 2) {
      throw std::invalid_argument("compat mode requires min_keep_len >= 2");
    }
    return ExtractCompat(source, answer, config.min_keep_len);
  }
  return ExtractMasked(source, answer, config.min_keep_len);
}

}  // namespace qafid
