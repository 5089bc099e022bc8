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

// CorpusReport serialization.
//
// Markdown columns: EXPERTS, REJ, LISR, TEAC, COV, CCR, ROUGE-L, preceded by
// a Model column when the report carries a label. Percentages use two
// decimals. TEAC is the per-sample mean rounded to the nearest integer, with
// halves rounded away from zero (std::llround). EXPERTS is an external score
// printed with at most two decimals and no trailing zeros. Absent values are
// blank cells. A report without samples or values renders the header only.
//
// CSV (RFC 4180, CRLF line endings) and JSON carry every field; JSON keeps
// full double precision and round-trips exactly.

#ifndef QAFID_REPORT_H_
#define QAFID_REPORT_H_

#include <ostream>
#include <string>
#include <string_view>

#include "qafid/metrics.h"

namespace qafid {

enum class ReportFormat { kJson, kCsv, kMarkdown };

// Throws std::invalid_argument for names other than json, csv, markdown.
ReportFormat ParseReportFormat(std::string_view name);

std::string ReportToJson(const CorpusReport& report);
// Throws ValidationError on malformed input.
CorpusReport ReportFromJson(std::string_view json_text);
std::string ReportToCsv(const CorpusReport& report);
std::string ReportToMarkdown(const CorpusReport& report);

std::string RenderReport(const CorpusReport& report, ReportFormat format);

// Throws IoError if the destination cannot be written.
void EmitReport(const CorpusReport& report, ReportFormat format,
                std::ostream& out);
void EmitReport(const CorpusReport& report, ReportFormat format,
                const std::string& path);

}  // namespace qafid

#endif  // QAFID_REPORT_H_
