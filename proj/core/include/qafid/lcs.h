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

// Character-level longest common substring and the iterative extraction loop
// that measures how much of an answer was copied from a source document.

#ifndef QAFID_LCS_H_
#define QAFID_LCS_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "qafid/text.h"

namespace qafid {

// Half-open [start, end) range of code-point indices.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  friend auto operator<=>(const Span&, const Span&) = default;
};

struct CommonSubstring {
  CharSeq text;
  size_t end_in_a = 0;  // exclusive end index of the match in `a`
  size_t end_in_b = 0;

  size_t length() const { return text.size(); }
  friend bool operator==(const CommonSubstring&,
                         const CommonSubstring&) = default;
};

// Longest run of equal, unblanked cells shared by `a` and `b`. Ties go to the
// smallest end index in `a`, then the smallest end index in `b`. Returns
// nullopt when the texts share no unblanked cell.
//
// Runs in O(|a| + |b| + number of equal cell pairs) time and O(|b|) space.
std::optional<CommonSubstring> LongestCommonSubstring(const MaskableText& a,
                                                      const MaskableText& b);

// Reference implementation that enumerates substrings directly. Same contract
// as LongestCommonSubstring. Throws std::length_error if either input is
// longer than kBruteForceMaxLength.
inline constexpr size_t kBruteForceMaxLength = 64;
std::optional<CommonSubstring> LongestCommonSubstringBruteForce(
    const MaskableText& a, const MaskableText& b);

// First occurrence of `needle` in `haystack`. Throws std::invalid_argument
// for an empty needle.
std::optional<Span> FindSubstringPositions(const CharSeq& needle,
                                           const CharSeq& haystack);

struct Segment {
  CharSeq text;
  Span source_span;
  Span answer_span;
  size_t order = 0;  // extraction iteration, 0-based

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct ExtractionTrace {
  std::vector<Segment> segments;  // extraction order
  std::optional<Span> source_bounds;
  size_t answer_len = 0;
  size_t source_len = 0;

  // Sum of segment lengths.
  size_t covered_len() const;

  friend bool operator==(const ExtractionTrace&,
                         const ExtractionTrace&) = default;
};

struct ExtractionConfig {
  // Segments shorter than this end the loop.
  size_t min_keep_len = 4;

  // Replays the original string-rewriting procedure: every occurrence of a
  // kept substring is replaced by a single '*' in both working strings, a
  // literal '*' acts as a hole, and spans are the first occurrence of the
  // substring in the unmodified texts. Answer spans may then overlap.
  bool compat_paper = false;
};

// Repeatedly takes the longest common substring of the progressively blanked
// source and answer, keeping it while its length is at least
// config.min_keep_len. Throws std::invalid_argument if min_keep_len < 1, or
// < 2 in compat mode (single-character replacements would not shrink the
// strings).
ExtractionTrace IterativeExtract(const CharSeq& source, const CharSeq& answer,
                                 const ExtractionConfig& config = {});

}  // namespace qafid

#endif  // QAFID_LCS_H_
