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

#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "qafid/errors.h"
#include "qafid/harness.h"
#include "qafid/lcs.h"
#include "qafid/metrics.h"
#include "qafid/qa_parser.h"
#include "qafid/report.h"
#include "qafid/text.h"
#include "qafid/vocab.h"

namespace qafid::cli {
namespace {

using json = nlohmann::ordered_json;

// Bad flag values or combinations.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OptionSpec {
  const char* key;
  const char* flag;  // CLI11 name, e.g. "--min-keep-len" or "input,--input"
  const char* help;
  const char* default_value;  // nullptr: no default
  bool is_flag = false;
};

// Every option any subcommand understands. Config files may set any of these.
const std::vector<OptionSpec>& AllOptions() {
  static const std::vector<OptionSpec> kOptions = {
      {"corpus", "--corpus", "JSONL corpus to evaluate", nullptr},
      {"format", "--format", "Report format: json, csv or markdown", "markdown"},
      {"out", "--out", "Write the report here instead of stdout", nullptr},
      {"min_keep_len", "--min-keep-len",
       "Shortest common substring kept by extraction", "4"},
      {"compat_paper", "--compat-paper",
       "Replay the original asterisk-rewriting extraction", "false", true},
      {"rouge_vs_source", "--rouge-vs-source",
       "Score ROUGE-L against the source text instead of reference answers",
       "false", true},
      {"refusal_patterns", "--refusal-patterns",
       "Refusal pattern file (default: built-in patterns)", nullptr},
      {"workers", "--workers", "Evaluation threads", "1"},
      {"normalization", "--normalization",
       "Unicode normalization before scoring: none or nfc", "none"},
      {"seed", "--seed", "Random seed", "0"},
      {"strict", "--strict", "Exit 2 when the output cannot be parsed",
       "false", true},
      {"per_sample", "--per-sample", "Write per-sample metrics as JSONL here",
       nullptr},
      {"experts", "--experts", "External expert score to show in the report",
       nullptr},
      {"label", "--label", "Row label for the report", nullptr},
      {"source", "source,--source", "Source document file", nullptr},
      {"answer", "answer,--answer", "Answer text file", nullptr},
      {"input", "input,--input", "Model output file", nullptr},
      {"base_vocab", "--base-vocab", "Base vocabulary, one token per line",
       nullptr},
      {"base_matrix", "--base-matrix", "Base embedding matrix (EMB1)", nullptr},
      {"new_tokens", "--new-tokens", "Tokens to add, one per line", nullptr},
      {"mode", "--mode", "New-row initialization: mean or random", "mean"},
      {"out_vocab", "--out-vocab", "Extended vocabulary output", nullptr},
      {"out_matrix", "--out-matrix", "Extended matrix output", nullptr},
      {"fallback_token", "--fallback-token",
       "Base token used for code points no base token covers", nullptr},
      {"randomize_existing_cjk", "--randomize-existing-cjk",
       "Also re-initialize base tokens containing CJK characters", "false",
       true},
  };
  return kOptions;
}

const OptionSpec& FindSpec(std::string_view key) {
  for (const OptionSpec& s : AllOptions()) {
    if (key == s.key) return s;
  }
  throw std::logic_error("unknown option key " + std::string(key));
}

std::string NormalizeKey(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string StripFinalNewline(std::string text) {
  if (!text.empty() && text.back() == '\n') text.pop_back();
  if (!text.empty() && text.back() == '\r') text.pop_back();
  return text;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError(key + ": expected a boolean, got '" + v + "'");
}

// Options of one subcommand, resolved flag > config > default.
class Settings {
 public:
  Settings(CLI::App* app, std::vector<std::string> keys)
      : app_(app), keys_(std::move(keys)) {
    for (const std::string& key : keys_) {
      const OptionSpec& spec = FindSpec(key);
      Slot& slot = slots_[key];
      if (spec.is_flag) {
        slot.option = app->add_flag(spec.flag, slot.flag, spec.help);
      } else {
        std::string help = spec.help;
        if (spec.default_value) {
          help += " [default: " + std::string(spec.default_value) + "]";
        }
        slot.option = app->add_option(spec.flag, slot.text, help);
      }
    }
    app->add_option("--config", config_path_,
                    std::string("key=value config file (default: $") +
                        kConfigEnvVar + ")");
    app->add_flag("--show-config", show_config_,
                  "Print the effective configuration and exit");
  }

  void Resolve() {
    std::string path = config_path_;
    if (path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    std::map<std::string, std::string> file_values;
    if (!path.empty()) {
      try {
        file_values = ParseConfigText(ReadTextFile(path));
      } catch (const std::invalid_argument& e) {
        throw UsageError(path + ": " + e.what());
      }
    }
    for (const std::string& key : keys_) {
      const OptionSpec& spec = FindSpec(key);
      Slot& slot = slots_[key];
      if (slot.option->count() > 0) {
        slot.value = spec.is_flag ? (slot.flag ? "true" : "false") : slot.text;
        slot.origin = "flag";
      } else if (auto it = file_values.find(key); it != file_values.end()) {
        slot.value = it->second;
        slot.origin = "config";
      } else if (spec.default_value) {
        slot.value = spec.default_value;
        slot.origin = "default";
      }
    }
  }

  bool show_config() const { return show_config_; }

  void PrintConfig(std::ostream& out) const {
    for (const std::string& key : keys_) {
      const Slot& slot = slots_.at(key);
      out << key << "=" << slot.value.value_or("") << "  # "
          << (slot.value ? slot.origin : "unset") << "\n";
    }
  }

  std::optional<std::string> Get(const std::string& key) const {
    return slots_.at(key).value;
  }

  std::string Require(const std::string& key) const {
    std::optional<std::string> v = Get(key);
    if (!v || v->empty()) {
      throw UsageError("missing required option --" +
                       std::string(FindSpec(key).flag).substr(
                           std::string(FindSpec(key).flag).rfind("--") + 2));
    }
    return *v;
  }

  bool GetBool(const std::string& key) const {
    return ParseBool(key, Get(key).value_or("false"));
  }

  uint64_t GetUnsigned(const std::string& key) const {
    const std::string v = Require(key);
    try {
      size_t used = 0;
      if (!v.empty() && v.front() == '-') throw std::invalid_argument(v);
      const unsigned long long n = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return n;
    } catch (const std::exception&) {
      throw UsageError(key + ": expected a non-negative integer, got '" + v +
                       "'");
    }
  }

  std::optional<double> GetDouble(const std::string& key) const {
    std::optional<std::string> v = Get(key);
    if (!v || v->empty()) return std::nullopt;
    try {
      size_t used = 0;
      const double d = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument(*v);
      return d;
    } catch (const std::exception&) {
      throw UsageError(key + ": expected a number, got '" + *v + "'");
    }
  }

 private:
  struct Slot {
    CLI::Option* option = nullptr;
    std::string text;
    bool flag = false;
    std::optional<std::string> value;
    std::string origin;
  };

  CLI::App* app_;
  std::vector<std::string> keys_;
  std::map<std::string, Slot> slots_;
  std::string config_path_;
  bool show_config_ = false;
};

EvalConfig BuildEvalConfig(const Settings& s) {
  EvalConfig config;
  config.min_keep_len = s.GetUnsigned("min_keep_len");
  config.compat_paper = s.GetBool("compat_paper");
  try {
    config.normalization = ParseNormalization(s.Require("normalization"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

void ValidateConfig(const EvalConfig& config) {
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Writes to --out when given, else to `out`.
void Deliver(const Settings& s, std::string_view text, std::ostream& out) {
  if (std::optional<std::string> path = s.Get("out"); path && !path->empty()) {
    WriteTextFile(*path, text);
  } else {
    out << text;
    out.flush();
  }
}

int RunEval(const Settings& s, std::ostream& out, std::ostream& err) {
  EvalConfig config = BuildEvalConfig(s);
  config.rouge_vs_source = s.GetBool("rouge_vs_source");
  config.worker_count = s.GetUnsigned("workers");
  config.refusal_pattern_file = s.Get("refusal_patterns").value_or("");
  ValidateConfig(config);

  ReportFormat format;
  try {
    format = ParseReportFormat(s.Require("format"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::string corpus = s.Require("corpus");
  const RefusalPatternSet patterns = LoadRefusalPatterns(config);

  FileEvaluation evaluation = EvaluateCorpusFile(corpus, config, patterns);
  evaluation.report.label = s.Get("label");
  if (evaluation.report.label && evaluation.report.label->empty()) {
    evaluation.report.label.reset();
  }
  evaluation.report.experts = s.GetDouble("experts");

  if (std::optional<std::string> path = s.Get("per_sample");
      path && !path->empty()) {
    std::string lines;
    for (const SampleMetrics& m : evaluation.samples) {
      lines += SampleMetricsToJsonLine(m);
      lines.push_back('\n');
    }
    WriteTextFile(*path, lines);
  }
  const ReportCounts& c = evaluation.report.counts;
  if (c.malformed > 0 || c.rejected_input > 0 || c.long_source > 0) {
    err << "note: " << c.malformed << " malformed, " << c.rejected_input
        << " rejected-input, " << c.long_source << " long-source samples\n";
  }
  Deliver(s, RenderReport(evaluation.report, format), out);
  return kExitOk;
}

json SpanJson(const Span& span) { return json::array({span.start, span.end}); }

int RunTrace(const Settings& s, std::ostream& out, std::ostream&) {
  EvalConfig config = BuildEvalConfig(s);
  ValidateConfig(config);
  auto load = [&](const std::string& key) {
    std::string text = StripFinalNewline(ReadTextFile(s.Require(key)));
    if (config.normalization == Normalization::kNfc) text = NormalizeNfc(text);
    try {
      return CharSeq::FromUtf8(text);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(s.Require(key) + ": " + e.what());
    }
  };
  const CharSeq source = load("source");
  const CharSeq answer = load("answer");
  const ExtractionTrace trace = IterativeExtract(
      source, answer, {config.min_keep_len, config.compat_paper});

  json segments = json::array();
  for (const Segment& seg : trace.segments) {
    segments.push_back({{"text", seg.text.ToUtf8()},
                        {"source_span", SpanJson(seg.source_span)},
                        {"answer_span", SpanJson(seg.answer_span)},
                        {"order", seg.order}});
  }
  json doc{{"segments", std::move(segments)},
           {"source_bounds", trace.source_bounds
                                 ? SpanJson(*trace.source_bounds)
                                 : json(nullptr)},
           {"source_len", trace.source_len},
           {"answer_len", trace.answer_len}};
  if (trace.answer_len > 0) {
    const TextMetrics m = ComputeTextMetrics(trace);
    doc["metrics"] = {{"cov", m.cov},
                      {"ccr", m.ccr},
                      {"teac", m.teac},
                      {"lisr", m.lisr ? json(*m.lisr) : json(nullptr)}};
  } else {
    doc["metrics"] = nullptr;
  }
  Deliver(s, doc.dump(2) + "\n", out);
  return kExitOk;
}

int RunParse(const Settings& s, std::ostream& out, std::ostream& err) {
  std::string text = ReadTextFile(s.Require("input"));
  if (ParseNormalization(s.Require("normalization")) == Normalization::kNfc) {
    text = NormalizeNfc(text);
  }
  EvalConfig config;
  config.refusal_pattern_file = s.Get("refusal_patterns").value_or("");
  const RefusalPatternSet patterns = LoadRefusalPatterns(config);
  const ParsedOutput parsed = ParseOutput(text, patterns);

  json doc;
  bool malformed = false;
  if (const auto* pairs = std::get_if<ParsedPairs>(&parsed)) {
    json list = json::array();
    for (const QAPair& p : pairs->pairs) {
      list.push_back(
          {{"index", p.index}, {"question", p.question}, {"answer", p.answer}});
    }
    doc = {{"pairs", std::move(list)}, {"dropped_blocks", pairs->dropped_blocks}};
  } else if (const auto* refusal = std::get_if<Refusal>(&parsed)) {
    doc = {{"refusal",
            {{"pattern_id", refusal->pattern_id},
             {"pattern", refusal->pattern},
             {"matched", refusal->matched}}}};
  } else {
    const auto& bad = std::get<Malformed>(parsed);
    doc = {{"malformed", {{"line", bad.line}, {"message", bad.message}}}};
    malformed = true;
  }
  Deliver(s, doc.dump(2, ' ', false, json::error_handler_t::replace) + "\n",
          out);
  if (malformed && s.GetBool("strict")) {
    err << "error: output is malformed\n";
    return kExitValidation;
  }
  return kExitOk;
}

std::vector<std::string> ReadTokenLines(const std::string& path) {
  std::vector<std::string> tokens;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) tokens.push_back(std::move(line));
  }
  return tokens;
}

int RunExtendVocab(const Settings& s, std::ostream& out, std::ostream& err) {
  InitMode mode;
  const std::string mode_name = s.Require("mode");
  if (mode_name == "mean") {
    mode = InitMode::kMean;
  } else if (mode_name == "random") {
    mode = InitMode::kRandom;
  } else {
    throw UsageError("--mode must be mean or random, got '" + mode_name + "'");
  }
  const uint64_t seed = s.GetUnsigned("seed");
  const std::string out_vocab = s.Require("out_vocab");
  const std::string out_matrix = s.Require("out_matrix");

  const Vocabulary base = Vocabulary::Load(s.Require("base_vocab"));
  const EmbeddingMatrix matrix = EmbeddingMatrix::Load(s.Require("base_matrix"));
  const std::vector<std::string> new_tokens =
      ReadTokenLines(s.Require("new_tokens"));

  std::optional<size_t> fallback;
  if (std::optional<std::string> f = s.Get("fallback_token"); f && !f->empty()) {
    fallback = base.Find(*f);
    if (!fallback) {
      throw ValidationError("fallback token '" + *f +
                            "' is not in the base vocabulary");
    }
  }

  ExtensionResult result;
  try {
    result = ExtendVocabulary(base, matrix, new_tokens, mode, seed, fallback);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  std::vector<size_t> randomized;
  if (s.GetBool("randomize_existing_cjk")) {
    randomized = IdentifyCjkTokens(base);
    result.matrix =
        RandomizeTokenEmbeddings(std::move(result.matrix), randomized, seed + 1);
  }
  for (const std::string& t : result.skipped) {
    err << "warning: skipped duplicate token '" << t << "'\n";
  }
  result.vocab.Save(out_vocab);
  result.matrix.Save(out_matrix);

  json summary{{"base_size", base.size()},
               {"added", result.vocab.size() - base.size()},
               {"skipped", result.skipped.size()},
               {"randomized_existing", randomized.size()},
               {"size", result.vocab.size()},
               {"dim", result.matrix.dim()}};
  out << summary.dump() << "\n";
  return kExitOk;
}

std::string DescribeAllFlags(const CLI::App& app) {
  std::string text = "Subcommand flags:\n";
  for (const CLI::App* sub : app.get_subcommands({})) {
    text += "  " + sub->get_name() + ":";
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_name(false, true);
      if (name.rfind("--", 0) != 0 || name == "--help") continue;
      text += " " + name;
    }
    text += "\n";
  }
  text += std::string("Config file: $") + kConfigEnvVar +
          " or --config; flags override it.";
  return text;
}

}  // namespace

std::map<std::string, std::string> ParseConfigText(std::string_view text) {
  std::map<std::string, std::string> values;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = TrimText(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected key=value");
    }
    std::string key = NormalizeKey(std::string(TrimText(trimmed.substr(0, eq))));
    const bool known = std::any_of(
        AllOptions().begin(), AllOptions().end(),
        [&](const OptionSpec& s) { return key == s.key; });
    if (!known) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
    values[key] = std::string(TrimText(trimmed.substr(eq + 1)));
  }
  return values;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"qafid: text-fidelity metrics for generated QA pairs", "qafid"};
  app.require_subcommand(1);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a JSONL corpus");
  Settings eval_settings(
      eval, {"corpus", "format", "out", "min_keep_len", "compat_paper",
             "rouge_vs_source", "refusal_patterns", "workers", "normalization",
             "per_sample", "experts", "label"});

  CLI::App* trace = app.add_subcommand(
      "trace", "Print the extraction trace for one source/answer pair");
  Settings trace_settings(trace, {"source", "answer", "min_keep_len",
                                  "compat_paper", "normalization", "out"});

  CLI::App* parse = app.add_subcommand(
      "parse", "Parse a model output into QA pairs or a refusal");
  Settings parse_settings(parse, {"input", "refusal_patterns", "strict",
                                  "normalization", "out"});

  CLI::App* extend = app.add_subcommand(
      "extend-vocab", "Extend a vocabulary and its embedding matrix");
  Settings extend_settings(
      extend, {"base_vocab", "base_matrix", "new_tokens", "mode", "seed",
               "out_vocab", "out_matrix", "fallback_token",
               "randomize_existing_cjk"});

  app.footer(DescribeAllFlags(app));

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("qafid");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  struct Command {
    CLI::App* app;
    Settings* settings;
    int (*run)(const Settings&, std::ostream&, std::ostream&);
  };
  const Command commands[] = {{eval, &eval_settings, RunEval},
                              {trace, &trace_settings, RunTrace},
                              {parse, &parse_settings, RunParse},
                              {extend, &extend_settings, RunExtendVocab}};
  for (const Command& cmd : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      cmd.settings->Resolve();
      if (cmd.settings->show_config()) {
        cmd.settings->PrintConfig(out);
        return kExitOk;
      }
      return cmd.run(*cmd.settings, out, err);
    } catch (const IoError& e) {
      err << "error: " << e.what() << "\n";
      return kExitIo;
    } catch (const ValidationError& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const DecompositionError& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitValidation;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitIo;
    }
  }
  return kExitValidation;
}

}  // namespace qafid::cli
