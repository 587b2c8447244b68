/* Copyright 2026 The sggbench Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef SGG_INGEST_H_
#define SGG_INGEST_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

#include "sgg/core.h"

namespace sgg {

// Scene-graph TSV: one `image_id<TAB>payload` line per image, where payload is
//   {"objects":[{"box":[x1,y1,x2,y2],"label":str,"score":float}],
//    "relations":[{"sub":int,"obj":int,"pred":str,"score":float}]}
// Ground truth and predictions share this schema; ground truth carries 1.0
// scores throughout.
//
// Errors: ParseError (with 1-based line), VocabularyError (naming the label),
// DuplicateError (repeated image_id). Lines are parsed on `threads` workers;
// the split keeps file order and the reported error is the earliest line's.
DatasetSplit ParseSceneGraphs(std::string_view text,
                              const Vocabulary& vocabulary, int threads = 1);
DatasetSplit ReadSceneGraphs(const std::filesystem::path& path,
                             const Vocabulary& vocabulary, int threads = 1);

// Doubles are written with 17 significant digits, so a write/read cycle
// reproduces the split exactly.
std::string SceneGraphLine(const SceneGraph& graph,
                           const Vocabulary& vocabulary);
void WriteSceneGraphs(std::ostream& out, const DatasetSplit& split,
                      const Vocabulary& vocabulary);
void WriteSceneGraphs(const std::filesystem::path& path,
                      const DatasetSplit& split, const Vocabulary& vocabulary);

// Vocabulary file: object labels, a line holding only `--`, predicate labels.
// Blank lines are ignored.
Vocabulary ParseVocabulary(std::string_view text);
Vocabulary ReadVocabulary(const std::filesystem::path& path);
std::string FormatVocabulary(const Vocabulary& vocabulary);
void WriteVocabulary(const std::filesystem::path& path,
                     const Vocabulary& vocabulary);

// Builds a vocabulary from the labels used in a scene-graph TSV, in order of
// first appearance. Used when no vocabulary file is supplied.
Vocabulary InferVocabulary(std::string_view text);

// Metric name -> value; std::map keeps keys sorted.
using MetricReport = std::map<std::string, double>;

enum class ReportFormat { kTsv, kJson };
ReportFormat ParseReportFormat(std::string_view name);  // throws ConfigError

// TSV: a `metric<TAB>value` header then one line per key. JSON: one object.
// Values use fixed 4-decimal formatting. Throws ContractError on non-finite
// values.
std::string FormatReport(const MetricReport& report, ReportFormat format);
void WriteReport(const MetricReport& report,
                 const std::filesystem::path& path, ReportFormat format);

// Whole-file helpers; throw IoError.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace sgg

#endif  // SGG_INGEST_H_
