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

// Character-level ROUGE-L (beta = 1) values computed offline with a separate
// full-table subsequence DP and frozen here.

#ifndef QAFID_TESTS_ROUGE_FIXTURES_H_
#define QAFID_TESTS_ROUGE_FIXTURES_H_

#include <array>

namespace qafid::testdata {

struct RougeFixture {
  const char* candidate;
  const char* reference;
  double precision, recall, f;
};

inline constexpr std::array<RougeFixture, 20> kRougeFixtures = {{
    {"ABCD", "ABCD", 100, 100, 100},
    {"ACBD", "ABCD", 75, 75, 75},
    {"XYZ", "ABC", 0, 0, 0},
    {"", "ABC", 0, 0, 0},
    {"A", "A", 100, 100, 100},
    {"AB", "BA", 50, 50, 50},
    {"ABCDEF", "ACE", 50, 100, 66.666666666666671},
    {"ACE", "ABCDEF", 100, 50, 66.666666666666671},
    {"ABAB", "BABA", 75, 75, 75},
    {"AAAA", "AA", 50, 100, 66.666666666666671},
    {"AA", "AAAA", 100, 50, 66.666666666666671},
    {"KITTEN", "SITTING", 66.666666666666671, 57.142857142857146,
     61.53846153846154},
    {"心智模型", "心智的模型", 100, 80, 88.888888888888886},
    {"心智模型是解释", "心智模型", 57.142857142857146, 100,
     72.727272727272734},
    {"ABCBDAB", "BDCABA", 57.142857142857146, 66.666666666666671,
     61.53846153846154},
    {"HELLO WORLD", "WORLD HELLO", 45.454545454545453, 45.454545454545453,
     45.454545454545453},
    {"abc", "ABC", 0, 0, 0},
    {"1234567890", "0987654321", 10, 10, 10},
    {"QA对抽取", "抽取QA对", 60, 60, 60},
    {"XMJYAUZ", "MZJAWXU", 57.142857142857146, 57.142857142857146,
     57.142857142857146},
}};

}  // namespace qafid::testdata

#endif  // QAFID_TESTS_ROUGE_FIXTURES_H_
