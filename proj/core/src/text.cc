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

#include "qafid/text.h"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <stdexcept>

namespace qafid {

std::u32string DecodeUtf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
  const int32_t length = static_cast<int32_t>(utf8.size());
  if (utf8.size() > static_cast<size_t>(INT32_MAX)) {
    throw std::invalid_argument("text too large");
  }
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      throw std::invalid_argument("ill-formed UTF-8 at byte " +
                                  std::to_string(at));
    }
    out.push_back(static_cast<CodePoint>(c));
  }
  return out;
}

std::string EncodeUtf8(std::u32string_view cells) {
  std::string out;
  out.reserve(cells.size());
  for (CodePoint c : cells) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

bool IsValidUtf8(std::string_view utf8) {
  try {
    DecodeUtf8(utf8);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

CharSeq CharSeq::FromUtf8(std::string_view utf8) {
  return CharSeq(DecodeUtf8(utf8));
}

std::string CharSeq::ToUtf8() const { return EncodeUtf8(cells_); }

CharSeq CharSeq::Slice(size_t start, size_t end) const {
  if (start > end || end > cells_.size()) {
    throw std::out_of_range("CharSeq::Slice");
  }
  return CharSeq(cells_.substr(start, end - start));
}

MaskableText MaskableText::WithSentinel(CharSeq base, CodePoint sentinel) {
  MaskableText text(std::move(base));
  for (size_t i = 0; i < text.size(); ++i) {
    if (text.base_[i] == sentinel) text.mask_[i] = 1;
  }
  return text;
}

size_t MaskableText::blanked_count() const {
  return static_cast<size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

void MaskableText::Blank(size_t start, size_t end) {
  if (start > end || end > mask_.size()) {
    throw std::out_of_range("MaskableText::Blank");
  }
  std::fill(mask_.begin() + start, mask_.begin() + end, 1);
}

std::string NormalizeNfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString normalized = nfc->normalize(input, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("NFC normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool IsCjkCodePoint(CodePoint c) {
  return (c >= 0x4E00 && c <= 0x9FFF) ||  // CJK Unified Ideographs
         (c >= 0x3400 && c <= 0x4DBF) ||  // Extension A
         (c >= 0x3000 && c <= 0x303F) ||  // CJK Symbols and Punctuation
         (c >= 0xFF00 && c <= 0xFFEF);    // Halfwidth and Fullwidth Forms
}

std::string_view TrimText(std::string_view s) {
  static constexpr std::string_view kIdeographicSpace = "\xE3\x80\x80";
  auto is_ascii_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  for (;;) {
    if (!s.empty() && is_ascii_space(s.front())) {
      s.remove_prefix(1);
    } else if (s.starts_with(kIdeographicSpace)) {
      s.remove_prefix(kIdeographicSpace.size());
    } else {
      break;
    }
  }
  for (;;) {
    if (!s.empty() && is_ascii_space(s.back())) {
      s.remove_suffix(1);
    } else if (s.ends_with(kIdeographicSpace)) {
      s.remove_suffix(kIdeographicSpace.size());
    } else {
      break;
    }
  }
  return s;
}

}  // namespace qafid
