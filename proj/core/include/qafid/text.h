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

#ifndef QAFID_TEXT_H_
#define QAFID_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qafid {

using CodePoint = char32_t;

// A sequence of Unicode scalar values. All positions used by the library are
// code-point indices into a CharSeq, never byte offsets.
class CharSeq {
 public:
  CharSeq() = default;
  explicit CharSeq(std::u32string cells) : cells_(std::move(cells)) {}

  // Decodes UTF-8. Throws std::invalid_argument on ill-formed input.
  static CharSeq FromUtf8(std::string_view utf8);
  std::string ToUtf8() const;

  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  CodePoint operator[](size_t i) const { return cells_[i]; }
  std::u32string_view view() const { return cells_; }
  const std::u32string& cells() const { return cells_; }

  // Half-open [start, end).
  CharSeq Slice(size_t start, size_t end) const;

  friend bool operator==(const CharSeq&, const CharSeq&) = default;

 private:
  std::u32string cells_;
};

// A fixed-length text whose cells can be blanked individually. A blanked cell
// keeps its position but compares unequal to every cell, blanked or not.
class MaskableText {
 public:
  MaskableText() = default;
  explicit MaskableText(CharSeq base)
      : base_(std::move(base)), mask_(base_.size(), 0) {}

  // Marks every cell equal to `sentinel` as blanked.
  static MaskableText WithSentinel(CharSeq base, CodePoint sentinel);

  const CharSeq& base() const { return base_; }
  size_t size() const { return base_.size(); }
  bool blanked(size_t i) const { return mask_[i] != 0; }
  size_t blanked_count() const;

  // Blanks [start, end). Throws std::out_of_range if end > size().
  void Blank(size_t start, size_t end);

 private:
  CharSeq base_;
  std::vector<uint8_t> mask_;
};

std::string EncodeUtf8(std::u32string_view cells);

// Throws std::invalid_argument on ill-formed UTF-8.
std::u32string DecodeUtf8(std::string_view utf8);

bool IsValidUtf8(std::string_view utf8);

// Canonical composition (NFC) of UTF-8 text.
std::string NormalizeNfc(std::string_view utf8);

// CJK Unified Ideographs (including extension A), CJK symbols and
// punctuation, and halfwidth/fullwidth forms.
bool IsCjkCodePoint(CodePoint c);

// Strips ASCII whitespace and U+3000 IDEOGRAPHIC SPACE from both ends.
std::string_view TrimText(std::string_view utf8);

}  // namespace qafid

#endif  // QAFID_TEXT_H_
