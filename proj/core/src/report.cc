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

#include "qafid/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "json.hpp"
#include "qafid/errors.h"

namespace qafid {
namespace {

using json = nlohmann::ordered_json;

std::string Fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Fixed2(const std::optional<double>& v) {
  return v ? Fixed2(*v) : std::string();
}

std::string Trimmed(double v) {
  std::string s = Fixed2(v);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string JoinRow(const std::vector<std::string>& cells, std::string_view sep,
                    std::string_view open, std::string_view close) {
  std::string out(open);
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += sep;
    out += cells[i];
  }
  out += close;
  return out;
}

bool HasValues(const CorpusReport& r) {
  return r.counts.total > 0 || r.experts || r.rej || r.false_refusal_rate ||
         r.lisr || r.teac || r.cov || r.ccr || r.rouge_l;
}

json Optional(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> GetOptional(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) {
    throw ValidationError(std::string("report field '") + key +
                          "' must be a number or null");
  }
  return it->get<double>();
}

#define QAFID_COUNT_FIELDS(X) \
  X(total)                    \
  X(scored)                   \
  X(refused)                  \
  X(malformed)                \
  X(rejected_input)           \
  X(summary)                  \
  X(reject)                   \
  X(normal)                   \
  X(lisr_eligible)            \
  X(rouge_eligible)           \
  X(reject_answered)          \
  X(long_source)

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw std::invalid_argument("unknown report format '" + std::string(name) +
                              "' (expected json, csv or markdown)");
}

std::string ReportToJson(const CorpusReport& r) {
  json counts = json::object();
#define X(field) counts[#field] = r.counts.field;
  QAFID_COUNT_FIELDS(X)
#undef X
  json obj{{"label", r.label ? json(*r.label) : json(nullptr)},
           {"experts", Optional(r.experts)},
           {"rej", Optional(r.rej)},
           {"false_refusal_rate", Optional(r.false_refusal_rate)},
           {"lisr", Optional(r.lisr)},
           {"teac", {{"mean", Optional(r.teac)}, {"sum", r.teac_sum}}},
           {"cov", Optional(r.cov)},
           {"ccr", Optional(r.ccr)},
           {"rouge_l", Optional(r.rouge_l)},
           {"counts", std::move(counts)}};
  return obj.dump(2) + "\n";
}

CorpusReport ReportFromJson(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ValidationError("report must be a JSON object");
  try {
    CorpusReport r;
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
      r.label = it->get<std::string>();
    }
    r.experts = GetOptional(obj, "experts");
    r.rej = GetOptional(obj, "rej");
    r.false_refusal_rate = GetOptional(obj, "false_refusal_rate");
    r.lisr = GetOptional(obj, "lisr");
    r.cov = GetOptional(obj, "cov");
    r.ccr = GetOptional(obj, "ccr");
    r.rouge_l = GetOptional(obj, "rouge_l");
    const json& teac = obj.at("teac");
    r.teac = GetOptional(teac, "mean");
    r.teac_sum = teac.at("sum").get<size_t>();
    const json& counts = obj.at("counts");
#define X(field) r.counts.field = counts.at(#field).get<size_t>();
    QAFID_COUNT_FIELDS(X)
#undef X
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid report: ") + e.what());
  }
}

std::string ReportToCsv(const CorpusReport& r) {
  std::vector<std::string> header = {
      "label", "experts", "rej",      "false_refusal_rate", "lisr",
      "teac_mean", "teac_sum", "cov", "ccr",               "rouge_l"};
#define X(field) header.push_back(#field);
  QAFID_COUNT_FIELDS(X)
#undef X
  std::vector<std::string> row = {
      CsvField(r.label.value_or("")), Fixed2(r.experts), Fixed2(r.rej),
      Fixed2(r.false_refusal_rate),   Fixed2(r.lisr),    Fixed2(r.teac),
      std::to_string(r.teac_sum),     Fixed2(r.cov),     Fixed2(r.ccr),
      Fixed2(r.rouge_l)};
#define X(field) row.push_back(std::to_string(r.counts.field));
  QAFID_COUNT_FIELDS(X)
#undef X
  return JoinRow(header, ",", "", "\r\n") + JoinRow(row, ",", "", "\r\n");
}

std::string ReportToMarkdown(const CorpusReport& r) {
  std::vector<std::string> header = {"EXPERTS", "REJ", "LISR",   "TEAC",
                                     "COV",     "CCR", "ROUGE-L"};
  std::vector<std::string> rule(header.size(), "---:");
  std::vector<std::string> row = {
      r.experts ? Trimmed(*r.experts) : std::string(),
      Fixed2(r.rej),
      Fixed2(r.lisr),
      r.teac ? std::to_string(std::llround(*r.teac)) : std::string(),
      Fixed2(r.cov),
      Fixed2(r.ccr),
      Fixed2(r.rouge_l)};
  if (r.label) {
    header.insert(header.begin(), "Model");
    rule.insert(rule.begin(), ":---");
    row.insert(row.begin(), *r.label);
  }
  std::string out = JoinRow(header, " | ", "| ", " |\n") +
                    JoinRow(rule, " | ", "| ", " |\n");
  if (HasValues(r)) out += JoinRow(row, " | ", "| ", " |\n");
  return out;
}

std::string RenderReport(const CorpusReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson:
      return ReportToJson(report);
    case ReportFormat::kCsv:
      return ReportToCsv(report);
    case ReportFormat::kMarkdown:
      return ReportToMarkdown(report);
  }
  return ReportToJson(report);
}

void EmitReport(const CorpusReport& report, ReportFormat format,
                std::ostream& out) {
  out << RenderReport(report, format);
  out.flush();
  if (!out) throw IoError("failed to write report");
}

void EmitReport(const CorpusReport& report, ReportFormat format,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open report destination: " + path);
  out << RenderReport(report, format);
  out.flush();
  if (!out) throw IoError("failed to write report: " + path);
}

}  // namespace qafid
