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

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

namespace qafid {
namespace {

TEST(CharSeqTest, DecodesCodePointsNotBytes) {
  CharSeq s = CharSeq::FromUtf8("心智A");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], U'心');
  EXPECT_EQ(s[2], U'A');
  EXPECT_EQ(s.Slice(1, 3).ToUtf8(), "智A");
}

TEST(CharSeqTest, RejectsIllFormedUtf8) {
  EXPECT_THROW(CharSeq::FromUtf8("\xff"), std::invalid_argument);
  EXPECT_THROW(CharSeq::FromUtf8("\xe5\xbf"), std::invalid_argument);
  EXPECT_THROW(CharSeq::FromUtf8("\xed\xa0\x80"), std::invalid_argument);
  EXPECT_FALSE(IsValidUtf8("\xc0\xaf"));
  EXPECT_TRUE(IsValidUtf8("问题：ok"));
}

TEST(CharSeqTest, RandomScalarValuesRoundTrip) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<uint32_t> cp(1, 0x10FFFF);
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string cells;
    while (cells.size() < 40) {
      uint32_t c = cp(rng);
      if (c >= 0xD800 && c <= 0xDFFF) continue;
      cells.push_back(static_cast<char32_t>(c));
    }
    std::string utf8 = EncodeUtf8(cells);
    ASSERT_TRUE(IsValidUtf8(utf8));
    ASSERT_EQ(DecodeUtf8(utf8), cells);
  }
}

TEST(MaskableTextTest, SentinelBlanksEveryOccurrence) {
  MaskableText m = MaskableText::WithSentinel(CharSeq::FromUtf8("A*B**"), U'*');
  EXPECT_EQ(m.blanked_count(), 3u);
  EXPECT_FALSE(m.blanked(0));
  EXPECT_TRUE(m.blanked(1));
  EXPECT_TRUE(m.blanked(4));
}

TEST(MaskableTextTest, BlankIsIdempotentAndBounded) {
  MaskableText m(CharSeq::FromUtf8("ABCDE"));
  m.Blank(1, 3);
  m.Blank(2, 4);
  EXPECT_EQ(m.blanked_count(), 3u);
  EXPECT_EQ(m.size(), 5u);
  EXPECT_THROW(m.Blank(4, 6), std::out_of_range);
}

TEST(NormalizeTest, ComposesCombiningSequences) {
  EXPECT_EQ(NormalizeNfc("e\xcc\x81"), "\xc3\xa9");
  EXPECT_EQ(NormalizeNfc("心智"), "心智");
}

TEST(CjkTest, BlockMembership) {
  EXPECT_TRUE(IsCjkCodePoint(U'爱'));
  EXPECT_TRUE(IsCjkCodePoint(U'，'));
  EXPECT_TRUE(IsCjkCodePoint(U'。'));
  EXPECT_TRUE(IsCjkCodePoint(U'㐀'));
  EXPECT_FALSE(IsCjkCodePoint(U'a'));
  EXPECT_FALSE(IsCjkCodePoint(U'é'));
}

TEST(TrimTest, StripsAsciiAndIdeographicSpace) {
  EXPECT_EQ(TrimText(" \t问题　 \n"), "问题");
  EXPECT_EQ(TrimText("   "), "");
}

}  // namespace
}  // namespace qafid
