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

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qafid/errors.h"
#include "qafid/text.h"

namespace qafid {
namespace {

constexpr std::string_view kDefaultPatterns =
#include "default_patterns.inc"
    ;

constexpr std::string_view kQuestionMarker = "问题";
constexpr std::string_view kAnswerMarker = "答案";
constexpr std::string_view kFullwidthColon = "：";
constexpr std::string_view kRegexPrefix = "re:";

// Length of a leading colon (fullwidth or ASCII), or 0.
size_t ColonLength(std::string_view s) {
  if (s.starts_with(kFullwidthColon)) return kFullwidthColon.size();
  if (s.starts_with(':')) return 1;
  return 0;
}

// Bytes consumed by `marker` plus its colon at the start of `s`, or 0.
size_t MarkerLength(std::string_view s, std::string_view marker) {
  if (!s.starts_with(marker)) return 0;
  std::string_view rest = s.substr(marker.size());
  size_t spaces = 0;
  while (spaces < rest.size() && (rest[spaces] == ' ' || rest[spaces] == '\t')) {
    ++spaces;
  }
  const size_t colon = ColonLength(rest.substr(spaces));
  if (colon == 0) return 0;
  return marker.size() + spaces + colon;
}

// Position of an inline answer marker, or npos.
size_t FindAnswerMarker(std::string_view s, size_t* marker_len) {
  for (size_t pos = s.find(kAnswerMarker); pos != std::string_view::npos;
       pos = s.find(kAnswerMarker, pos + 1)) {
    if (size_t len = MarkerLength(s.substr(pos), kAnswerMarker)) {
      *marker_len = len;
      return pos;
    }
  }
  return std::string_view::npos;
}

struct IndexMarker {
  int value = 0;
  std::string_view remainder;
};

// "12：" alone on a line, or directly followed by a question marker.
std::optional<IndexMarker> MatchIndexMarker(std::string_view s) {
  size_t digits = 0;
  while (digits < s.size() && s[digits] >= '0' && s[digits] <= '9') ++digits;
  if (digits == 0 || digits > 9) return std::nullopt;
  std::string_view rest = s.substr(digits);
  while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) {
    rest.remove_prefix(1);
  }
  const size_t colon = ColonLength(rest);
  if (colon == 0) return std::nullopt;
  rest = TrimText(rest.substr(colon));
  if (!rest.empty() && MarkerLength(rest, kQuestionMarker) == 0) {
    return std::nullopt;
  }
  return IndexMarker{std::stoi(std::string(s.substr(0, digits))), rest};
}

std::string ExpandNewlineEscapes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size() && text[i + 1] == 'n') {
      out.push_back('\n');
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

void AppendLine(std::string& field, std::string_view line) {
  if (!field.empty()) field.push_back('\n');
  field.append(line);
}

class BlockParser {
 public:
  void Feed(std::string_view raw_line, size_t line_no) {
    std::string_view rest = TrimText(raw_line);
    if (rest.empty()) {
      if (field_ == Field::kQuestion) question_.push_back('\n');
      if (field_ == Field::kAnswer) answer_.push_back('\n');
      return;
    }
    if (std::optional<IndexMarker> marker = MatchIndexMarker(rest)) {
      Close();
      index_ = marker->value;
      first_line_ = line_no;
      rest = marker->remainder;
      if (rest.empty()) return;
    }
    if (size_t n = MarkerLength(rest, kQuestionMarker)) {
      if (field_ != Field::kNone) Close();
      if (first_line_ == 0) first_line_ = line_no;
      field_ = Field::kQuestion;
      AppendQuestionText(TrimText(rest.substr(n)));
      return;
    }
    if (size_t n = MarkerLength(rest, kAnswerMarker)) {
      if (field_ == Field::kAnswer) Close();
      if (first_line_ == 0) first_line_ = line_no;
      field_ = Field::kAnswer;
      AppendLine(answer_, TrimText(rest.substr(n)));
      return;
    }
    switch (field_) {
      case Field::kNone:
        NoteOffending(line_no);
        break;
      case Field::kQuestion:
        AppendQuestionText(rest);
        break;
      case Field::kAnswer:
        AppendLine(answer_, rest);
        break;
    }
  }

  void Close() {
    if (field_ == Field::kNone && !index_) return;
    const std::string_view q = TrimText(question_);
    const std::string_view a = TrimText(answer_);
    if (!q.empty() && !a.empty()) {
      QAPair pair;
      pair.index = (index_ && *index_ > last_index_) ? *index_ : last_index_ + 1;
      pair.question = std::string(q);
      pair.answer = std::string(a);
      last_index_ = pair.index;
      result_.pairs.push_back(std::move(pair));
    } else {
      ++result_.dropped_blocks;
      NoteOffending(first_line_);
    }
    field_ = Field::kNone;
    index_.reset();
    question_.clear();
    answer_.clear();
    first_line_ = 0;
  }

  ParsedPairs& result() { return result_; }
  size_t first_offending_line() const { return first_offending_; }

 private:
  enum class Field { kNone, kQuestion, kAnswer };

  void AppendQuestionText(std::string_view text) {
    size_t marker_len = 0;
    const size_t at = FindAnswerMarker(text, &marker_len);
    if (at == std::string_view::npos) {
      AppendLine(question_, text);
      return;
    }
    AppendLine(question_, TrimText(text.substr(0, at)));
    field_ = Field::kAnswer;
    AppendLine(answer_, TrimText(text.substr(at + marker_len)));
  }

  void NoteOffending(size_t line_no) {
    if (first_offending_ == 0) first_offending_ = line_no;
  }

  Field field_ = Field::kNone;
  std::optional<int> index_;
  std::string question_;
  std::string answer_;
  size_t first_line_ = 0;
  int last_index_ = 0;
  size_t first_offending_ = 0;
  ParsedPairs result_;
};

}  // namespace

RefusalPatternSet::RefusalPatternSet(std::vector<RefusalPattern> patterns)
    : patterns_(std::move(patterns)) {
  compiled_.reserve(patterns_.size());
  for (const RefusalPattern& p : patterns_) {
    if (p.kind == RefusalPattern::Kind::kRegex) {
      try {
        compiled_.push_back(std::make_shared<const std::regex>(
            p.text, std::regex::ECMAScript | std::regex::optimize));
      } catch (const std::regex_error& e) {
        throw std::invalid_argument("bad refusal regex '" + p.text +
                                    "': " + e.what());
      }
    } else {
      compiled_.push_back(nullptr);
    }
  }
}

RefusalPatternSet RefusalPatternSet::Parse(std::string_view content) {
  std::vector<RefusalPattern> patterns;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    RefusalPattern p;
    if (line.starts_with(kRegexPrefix)) {
      p.kind = RefusalPattern::Kind::kRegex;
      p.text = line.substr(kRegexPrefix.size());
    } else {
      p.text = line;
    }
    if (p.text.empty()) continue;
    patterns.push_back(std::move(p));
  }
  return RefusalPatternSet(std::move(patterns));
}

RefusalPatternSet RefusalPatternSet::FromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open refusal patterns: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return Parse(buf.str());
}

std::string_view RefusalPatternSet::DefaultText() { return kDefaultPatterns; }

const RefusalPatternSet& RefusalPatternSet::Default() {
  static const RefusalPatternSet kSet = Parse(kDefaultPatterns);
  return kSet;
}

std::optional<RefusalMatch> RefusalPatternSet::Match(
    std::string_view text) const {
  for (size_t i = 0; i < patterns_.size(); ++i) {
    if (compiled_[i]) {
      std::match_results<std::string_view::const_iterator> m;
      if (std::regex_search(text.begin(), text.end(), m, *compiled_[i])) {
        return RefusalMatch{i, m.str()};
      }
    } else if (text.find(patterns_[i].text) != std::string_view::npos) {
      return RefusalMatch{i, patterns_[i].text};
    }
  }
  return std::nullopt;
}

std::optional<RefusalMatch> DetectRefusal(std::string_view text,
                                          const RefusalPatternSet& patterns) {
  if (patterns.empty()) {
    throw std::invalid_argument("DetectRefusal: empty pattern set");
  }
  return patterns.Match(text);
}

ParsedOutput ParseOutput(std::string_view text,
                         const RefusalPatternSet& patterns) {
  if (std::optional<RefusalMatch> m = patterns.Match(text)) {
    return Refusal{m->pattern_id, patterns[m->pattern_id].text,
                   std::move(m->matched)};
  }

  const std::string expanded = ExpandNewlineEscapes(text);
  BlockParser parser;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= expanded.size()) {
    size_t end = expanded.find('\n', start);
    if (end == std::string::npos) end = expanded.size();
    std::string_view line(expanded.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    parser.Feed(line, ++line_no);
    start = end + 1;
  }
  parser.Close();

  if (parser.result().pairs.empty()) {
    const size_t line =
        parser.first_offending_line() ? parser.first_offending_line() : 1;
    return Malformed{line, "no complete question/answer block (first "
                           "offending line " + std::to_string(line) + ")"};
  }
  return std::move(parser.result());
}

std::string RenderPairs(std::span<const QAPair> pairs) {
  std::string out;
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += std::to_string(pairs[i].index);
    out += "：\n问题：";
    out += pairs[i].question;
    out += "\n答案：";
    out += pairs[i].answer;
    out.push_back('\n');
  }
  return out;
}

std::string ConcatenateAnswers(std::span<const QAPair> pairs) {
  std::string out;
  for (const QAPair& p : pairs) out += p.answer;
  return out;
}

}  // namespace qafid
