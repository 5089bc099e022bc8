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

#include "qafid/harness.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "json.hpp"
#include "qafid/lcs.h"
#include "qafid/text.h"

namespace qafid {
namespace {

using nlohmann::json;

std::string LinePrefix(size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

const json& RequireField(const json& obj, const char* name, size_t line_no) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ValidationError(LinePrefix(line_no) + "missing field '" + name + "'");
  }
  return *it;
}

std::string RequireString(const json& obj, const char* name, size_t line_no) {
  const json& v = RequireField(obj, name, line_no);
  if (!v.is_string()) {
    throw ValidationError(LinePrefix(line_no) + "field '" + name +
                          "' must be a string");
  }
  return v.get<std::string>();
}

std::string MaybeNormalize(std::string text, Normalization n) {
  if (n == Normalization::kNfc) return NormalizeNfc(text);
  return text;
}

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json TextMetricsJson(const TextMetrics& t) {
  return json{{"cov", t.cov},
              {"ccr", t.ccr},
              {"teac", t.teac},
              {"lisr", OptionalNumber(t.lisr)}};
}

// Runs fn(i) for i in [0, n) on up to `workers` threads.
template <typename Fn>
void ParallelFor(size_t n, size_t workers, Fn&& fn) {
  workers = std::max<size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

std::string_view NormalizationName(Normalization n) {
  return n == Normalization::kNfc ? "nfc" : "none";
}

Normalization ParseNormalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "nfc") return Normalization::kNfc;
  throw std::invalid_argument("unknown normalization '" + std::string(name) +
                              "' (expected none or nfc)");
}

void EvalConfig::Validate() const {
  if (min_keep_len < 2) {
    throw std::invalid_argument("min_keep_len must be at least 2");
  }
  if (worker_count < 1) {
    throw std::invalid_argument("worker_count must be at least 1");
  }
}

RefusalPatternSet LoadRefusalPatterns(const EvalConfig& config) {
  if (config.refusal_pattern_file.empty()) return RefusalPatternSet::Default();
  return RefusalPatternSet::FromFile(config.refusal_pattern_file);
}

Sample ParseSampleLine(std::string_view line, size_t line_no) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ValidationError(LinePrefix(line_no) + "malformed JSON: " + e.what());
  }
  if (!obj.is_object()) {
    throw ValidationError(LinePrefix(line_no) + "expected a JSON object");
  }

  Sample s;
  s.doc_id = RequireString(obj, "doc_id", line_no);
  if (s.doc_id.empty()) {
    throw ValidationError(LinePrefix(line_no) + "empty doc_id");
  }
  s.source_text = RequireString(obj, "source_text", line_no);
  s.model_output = RequireString(obj, "model_output", line_no);

  const json& reject = RequireField(obj, "should_reject", line_no);
  if (!reject.is_boolean()) {
    throw ValidationError(LinePrefix(line_no) +
                          "field 'should_reject' must be a boolean");
  }
  s.should_reject = reject.get<bool>();

  try {
    s.category = ParseCategory(RequireString(obj, "category", line_no));
  } catch (const std::invalid_argument& e) {
    throw ValidationError(LinePrefix(line_no) + e.what());
  }
  if (s.should_reject != (s.category == Category::kReject)) {
    throw ValidationError(LinePrefix(line_no) +
                          "should_reject must be true exactly when category "
                          "is 'reject'");
  }

  if (auto it = obj.find("references"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ValidationError(LinePrefix(line_no) +
                            "field 'references' must be an array");
    }
    std::vector<QAPair> refs;
    int index = 0;
    for (const json& r : *it) {
      if (!r.is_object()) {
        throw ValidationError(LinePrefix(line_no) +
                              "each reference must be an object");
      }
      QAPair pair;
      pair.index = ++index;
      pair.question = RequireString(r, "question", line_no);
      pair.answer = RequireString(r, "answer", line_no);
      refs.push_back(std::move(pair));
    }
    s.references = std::move(refs);
  }
  return s;
}

std::string SampleToJsonLine(const Sample& sample) {
  json obj{{"doc_id", sample.doc_id},
           {"source_text", sample.source_text},
           {"model_output", sample.model_output},
           {"should_reject", sample.should_reject},
           {"category", CategoryName(sample.category)}};
  if (sample.references) {
    json refs = json::array();
    for (const QAPair& p : *sample.references) {
      refs.push_back({{"question", p.question}, {"answer", p.answer}});
    }
    obj["references"] = std::move(refs);
  }
  return obj.dump();
}

CorpusReader::CorpusReader(const std::string& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open corpus: " + path);
}

std::optional<Sample> CorpusReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (TrimText(line).empty()) continue;
    Sample s = ParseSampleLine(line, line_no_);
    auto [it, inserted] = seen_.emplace(s.doc_id, line_no_);
    if (!inserted) {
      throw ValidationError("duplicate doc_id '" + s.doc_id + "' on lines " +
                            std::to_string(it->second) + " and " +
                            std::to_string(line_no_));
    }
    return s;
  }
  if (in_.bad()) throw IoError("read failed: " + path_);
  return std::nullopt;
}

std::vector<Sample> LoadCorpus(const std::string& path) {
  CorpusReader reader(path);
  std::vector<Sample> out;
  while (std::optional<Sample> s = reader.Next()) out.push_back(std::move(*s));
  return out;
}

SampleMetrics EvaluateSample(const Sample& sample, const EvalConfig& config,
                             const RefusalPatternSet& patterns) {
  SampleMetrics m;
  m.doc_id = sample.doc_id;
  m.category = sample.category;
  try {
    const std::string source =
        MaybeNormalize(sample.source_text, config.normalization);
    const std::string output =
        MaybeNormalize(sample.model_output, config.normalization);
    const CharSeq src = CharSeq::FromUtf8(source);
    m.long_source = src.size() > kLongSourceChars;

    ParsedOutput parsed = ParseOutput(output, patterns);
    if (const auto* refusal = std::get_if<Refusal>(&parsed)) {
      m.status = SampleStatus::kRefused;
      m.refused = true;
      m.diagnostic = "refusal pattern " + std::to_string(refusal->pattern_id);
      return m;
    }
    if (const auto* bad = std::get_if<Malformed>(&parsed)) {
      m.status = SampleStatus::kMalformed;
      m.diagnostic = bad->message;
      return m;
    }
    const auto& pairs = std::get<ParsedPairs>(parsed).pairs;
    if (src.empty()) {
      m.status = SampleStatus::kRejectedInput;
      m.diagnostic = "empty source_text";
      return m;
    }

    const ExtractionConfig extraction{config.min_keep_len, config.compat_paper};
    const CharSeq answer = CharSeq::FromUtf8(ConcatenateAnswers(pairs));
    m.text = ComputeTextMetrics(IterativeExtract(src, answer, extraction));
    for (const QAPair& pair : pairs) {
      const CharSeq one = CharSeq::FromUtf8(pair.answer);
      m.pairs.push_back(
          {pair.index, ComputeTextMetrics(IterativeExtract(src, one, extraction))});
    }

    std::optional<CharSeq> reference;
    if (config.rouge_vs_source) {
      reference = src;
    } else if (sample.references) {
      reference = CharSeq::FromUtf8(MaybeNormalize(
          ConcatenateAnswers(*sample.references), config.normalization));
    }
    if (reference && !reference->empty()) {
      m.rouge_l_f = RougeL(answer, *reference).f;
    }
    m.status = SampleStatus::kScored;
  } catch (const std::exception& e) {
    m.status = SampleStatus::kRejectedInput;
    m.refused = false;
    m.text.reset();
    m.rouge_l_f.reset();
    m.pairs.clear();
    m.diagnostic = e.what();
  }
  return m;
}

std::vector<SampleMetrics> EvaluateSamples(std::span<const Sample> samples,
                                           const EvalConfig& config,
                                           const RefusalPatternSet& patterns) {
  config.Validate();
  std::vector<SampleMetrics> results(samples.size());
  ParallelFor(samples.size(), config.worker_count, [&](size_t i) {
    results[i] = EvaluateSample(samples[i], config, patterns);
  });
  return results;
}

CorpusReport EvaluateCorpus(std::span<const Sample> samples,
                            const EvalConfig& config,
                            const RefusalPatternSet& patterns) {
  const std::vector<SampleMetrics> results =
      EvaluateSamples(samples, config, patterns);
  return Aggregate(results);
}

FileEvaluation EvaluateCorpusFile(const std::string& path,
                                  const EvalConfig& config,
                                  const RefusalPatternSet& patterns) {
  config.Validate();
  CorpusReader reader(path);
  const size_t batch_size = config.worker_count * 4;
  FileEvaluation result;
  std::vector<Sample> batch;
  batch.reserve(batch_size);
  for (;;) {
    batch.clear();
    while (batch.size() < batch_size) {
      std::optional<Sample> s = reader.Next();
      if (!s) break;
      batch.push_back(std::move(*s));
    }
    if (batch.empty()) break;
    for (SampleMetrics& m : EvaluateSamples(batch, config, patterns)) {
      result.samples.push_back(std::move(m));
    }
  }
  std::sort(result.samples.begin(), result.samples.end(),
            [](const SampleMetrics& l, const SampleMetrics& r) {
              return l.doc_id < r.doc_id;
            });
  result.report = Aggregate(result.samples);
  return result;
}

std::string SampleMetricsToJsonLine(const SampleMetrics& m) {
  json obj{{"doc_id", m.doc_id},
           {"category", CategoryName(m.category)},
           {"status", StatusName(m.status)},
           {"refused", m.refused},
           {"long_source", m.long_source},
           {"reject_answered", m.reject_answered()},
           {"rouge_l_f", OptionalNumber(m.rouge_l_f)}};
  obj["metrics"] = m.text ? TextMetricsJson(*m.text) : json(nullptr);
  json pairs = json::array();
  for (const PairMetrics& p : m.pairs) {
    json entry = TextMetricsJson(p.text);
    entry["index"] = p.index;
    pairs.push_back(std::move(entry));
  }
  obj["pairs"] = std::move(pairs);
  if (!m.diagnostic.empty()) obj["diagnostic"] = m.diagnostic;
  return obj.dump();
}

}  // namespace qafid
