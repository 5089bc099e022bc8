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

#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "qafid/harness.h"
#include "qafid/lcs.h"
#include "qafid/metrics.h"

namespace qafid {
namespace {

std::u32string RandomText(std::mt19937_64& rng, size_t n, size_t alphabet) {
  std::u32string out(n, U'\0');
  for (char32_t& c : out) c = static_cast<char32_t>(0x4E00 + rng() % alphabet);
  return out;
}

// An answer stitched from source slices with short insertions between them.
std::u32string StitchedAnswer(std::mt19937_64& rng, const std::u32string& src,
                              size_t n) {
  std::u32string out;
  while (out.size() < n) {
    const size_t from = rng() % (src.size() - 48);
    out += src.substr(from, 4 + rng() % 44);
    if (rng() % 3 == 0) out += U"的";
  }
  out.resize(n);
  return out;
}

void BM_LongestCommonSubstring(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const size_t n = static_cast<size_t>(state.range(0));
  const size_t alphabet = static_cast<size_t>(state.range(1));
  MaskableText a{CharSeq(RandomText(rng, n, alphabet))};
  MaskableText b{CharSeq(RandomText(rng, n / 8, alphabet))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(LongestCommonSubstring(a, b));
  }
}
BENCHMARK(BM_LongestCommonSubstring)
    ->Args({1024, 300})
    ->Args({8192, 300})
    ->Args({8192, 4})
    ->Unit(benchmark::kMicrosecond);

void BM_IterativeExtract(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const size_t alphabet = static_cast<size_t>(state.range(0));
  const std::u32string src = RandomText(rng, 8192, alphabet);
  const CharSeq source(src);
  const CharSeq answer(StitchedAnswer(rng, src, 1024));
  for (auto _ : state) {
    benchmark::DoNotOptimize(IterativeExtract(source, answer));
  }
}
BENCHMARK(BM_IterativeExtract)->Arg(3000)->Arg(300)->Arg(26)->Unit(
    benchmark::kMillisecond);

void BM_RougeL(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const size_t n = static_cast<size_t>(state.range(0));
  const CharSeq a(RandomText(rng, n, 300));
  const CharSeq b(RandomText(rng, n, 300));
  for (auto _ : state) benchmark::DoNotOptimize(RougeL(a, b));
}
BENCHMARK(BM_RougeL)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_EvaluateCorpus(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::vector<Sample> samples;
  for (int i = 0; i < 300; ++i) {
    const std::u32string src = RandomText(rng, 2048, 300);
    Sample s;
    s.doc_id = "d" + std::to_string(i);
    s.source_text = EncodeUtf8(src);
    s.model_output = "1：\n问题：Q\n答案：" + EncodeUtf8(StitchedAnswer(rng, src, 256));
    s.category = Category::kSummary;
    samples.push_back(std::move(s));
  }
  EvalConfig config;
  config.worker_count = static_cast<size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EvaluateCorpus(samples, config, RefusalPatternSet::Default()));
  }
}
BENCHMARK(BM_EvaluateCorpus)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace qafid

BENCHMARK_MAIN();
