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

// Parser for numbered question/answer model output:
//
//   1：
//   问题：<question>
//   答案：<answer, possibly spanning lines>
//
// Blocks may be separated by blank lines or by the two-character escape
// "\n". Fullwidth and ASCII colons are both accepted after every marker.

#ifndef QAFID_QA_PARSER_H_
#define QAFID_QA_PARSER_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qafid {

struct QAPair {
  int index = 0;
  std::string question;
  std::string answer;

  friend bool operator==(const QAPair&, const QAPair&) = default;
};

struct RefusalPattern {
  enum class Kind { kLiteral, kRegex };

  Kind kind = Kind::kLiteral;
  std::string text;  // without the "re:" prefix
};

struct RefusalMatch {
  size_t pattern_id = 0;  // position in the pattern set
  std::string matched;
};

// An ordered, immutable set of refusal patterns. Text form: one pattern per
// line; "re:" introduces an ECMAScript regular expression applied to the raw
// UTF-8 bytes, anything else is a literal substring. Blank lines and lines
// starting with '#' are skipped.
class RefusalPatternSet {
 public:
  RefusalPatternSet() = default;
  explicit RefusalPatternSet(std::vector<RefusalPattern> patterns);

  // Throws std::invalid_argument on a bad regular expression.
  static RefusalPatternSet Parse(std::string_view content);
  // Throws IoError if the file cannot be read.
  static RefusalPatternSet FromFile(const std::string& path);
  // Same content as data/refusal_patterns.txt.
  static const RefusalPatternSet& Default();
  static std::string_view DefaultText();

  size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const RefusalPattern& operator[](size_t i) const { return patterns_[i]; }

  std::optional<RefusalMatch> Match(std::string_view text) const;

 private:
  std::vector<RefusalPattern> patterns_;
  std::vector<std::shared_ptr<const std::regex>> compiled_;  // null for literals
};

// Throws std::invalid_argument for an empty pattern set.
std::optional<RefusalMatch> DetectRefusal(std::string_view text,
                                          const RefusalPatternSet& patterns);

struct ParsedPairs {
  std::vector<QAPair> pairs;  // non-empty, strictly increasing indices
  size_t dropped_blocks = 0;  // blocks missing a question or an answer
};

struct Refusal {
  size_t pattern_id = 0;
  std::string pattern;
  std::string matched;
};

struct Malformed {
  size_t line = 0;  // 1-based, first offending line
  std::string message;
};

using ParsedOutput = std::variant<ParsedPairs, Refusal, Malformed>;

ParsedOutput ParseOutput(std::string_view text,
                         const RefusalPatternSet& patterns);

// Canonical "N：/问题：/答案：" rendering, one blank line between blocks.
std::string RenderPairs(std::span<const QAPair> pairs);

// Answers joined in order without a separator.
std::string ConcatenateAnswers(std::span<const QAPair> pairs);

}  // namespace qafid

#endif  // QAFID_QA_PARSER_H_
