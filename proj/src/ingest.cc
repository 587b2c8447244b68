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
#include "sgg/ingest.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "sgg/errors.h"
#include "sgg/parallel.h"

namespace sgg {
namespace {

using ordered_json = nlohmann::ordered_json;

struct Line {
  std::size_t number;
  std::string_view text;
};

// Splits on '\n', strips one trailing '\r', and drops empty lines.
std::vector<Line> SplitLines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view()
                                         : text.substr(end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back({number, line});
  }
  return lines;
}

double RequireNumber(const nlohmann::json& value, std::size_t line,
                     const char* what) {
  if (!value.is_number()) {
    throw ParseError(line, std::string(what) + " must be a number");
  }
  const double v = value.get<double>();
  if (!std::isfinite(v)) {
    throw ParseError(line, std::string(what) + " must be finite");
  }
  return v;
}

double RequireScore(const nlohmann::json& value, std::size_t line) {
  const double s = RequireNumber(value, line, "score");
  if (s < 0.0 || s > 1.0) throw ParseError(line, "score must be in [0,1]");
  return s;
}

int RequireIndex(const nlohmann::json& value, std::size_t line,
                 const char* what) {
  if (!value.is_number_integer()) {
    throw ParseError(line, std::string(what) + " must be an integer");
  }
  if (value.is_number_unsigned()) {
    const auto v = value.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
      throw ParseError(line, std::string(what) + " out of range");
    }
    return static_cast<int>(v);
  }
  const auto v = value.get<std::int64_t>();
  if (v < 0 || v > std::numeric_limits<int>::max()) {
    throw ParseError(line, std::string(what) + " out of range");
  }
  return static_cast<int>(v);
}

const nlohmann::json& RequireMember(const nlohmann::json& object,
                                    const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(line, std::string("missing \"") + key + "\"");
  }
  return *it;
}

const std::string& RequireString(const nlohmann::json& value,
                                 std::size_t line, const char* what) {
  if (!value.is_string()) {
    throw ParseError(line, std::string(what) + " must be a string");
  }
  return value.get_ref<const std::string&>();
}

SceneGraph ParseLine(const Line& line, const Vocabulary& vocabulary) {
  const std::size_t tab = line.text.find('\t');
  if (tab == std::string_view::npos) {
    throw ParseError(line.number, "expected image_id<TAB>payload");
  }
  SceneGraph graph;
  graph.image_id = std::string(line.text.substr(0, tab));
  if (graph.image_id.empty()) throw ParseError(line.number, "empty image_id");

  const auto payload =
      nlohmann::json::parse(line.text.substr(tab + 1), nullptr, false);
  if (payload.is_discarded() || !payload.is_object()) {
    throw ParseError(line.number, "payload is not a JSON object");
  }
  const auto& objects = RequireMember(payload, "objects", line.number);
  const auto& relations = RequireMember(payload, "relations", line.number);
  if (!objects.is_array() || !relations.is_array()) {
    throw ParseError(line.number, "\"objects\" and \"relations\" must be arrays");
  }

  graph.objects.reserve(objects.size());
  for (const auto& obj : objects) {
    if (!obj.is_object()) throw ParseError(line.number, "object must be a JSON object");
    const auto& box = RequireMember(obj, "box", line.number);
    if (!box.is_array() || box.size() != 4) {
      throw ParseError(line.number, "box must be [x1,y1,x2,y2]");
    }
    const double x1 = RequireNumber(box[0], line.number, "box coordinate");
    const double y1 = RequireNumber(box[1], line.number, "box coordinate");
    const double x2 = RequireNumber(box[2], line.number, "box coordinate");
    const double y2 = RequireNumber(box[3], line.number, "box coordinate");
    if (x1 > x2 || y1 > y2) {
      throw ParseError(line.number, "invalid box: requires x1 <= x2 and y1 <= y2");
    }
    const std::string& label =
        RequireString(RequireMember(obj, "label", line.number), line.number, "label");
    const auto index = vocabulary.FindObject(label);
    if (!index) throw VocabularyError(label, line.number);
    graph.objects.push_back(
        {BoundingBox(x1, y1, x2, y2), *index,
         RequireScore(RequireMember(obj, "score", line.number), line.number)});
  }

  const int n = static_cast<int>(graph.objects.size());
  graph.relations.reserve(relations.size());
  for (const auto& rel : relations) {
    if (!rel.is_object()) throw ParseError(line.number, "relation must be a JSON object");
    const int sub = RequireIndex(RequireMember(rel, "sub", line.number), line.number, "sub");
    const int obj = RequireIndex(RequireMember(rel, "obj", line.number), line.number, "obj");
    if (sub >= n || obj >= n) {
      throw ParseError(line.number, "relation references a missing object");
    }
    if (sub == obj) {
      throw ParseError(line.number, "relation subject and object must differ");
    }
    const std::string& pred =
        RequireString(RequireMember(rel, "pred", line.number), line.number, "pred");
    const auto index = vocabulary.FindPredicate(pred);
    if (!index) throw VocabularyError(pred, line.number);
    graph.relations.push_back(
        {sub, obj, *index,
         RequireScore(RequireMember(rel, "score", line.number), line.number)});
  }
  return graph;
}

std::string FormatValue(double value) {
  if (!std::isfinite(value)) {
    throw ContractError("report values must be finite");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

}  // namespace

DatasetSplit ParseSceneGraphs(std::string_view text,
                              const Vocabulary& vocabulary, int threads) {
  const std::vector<Line> lines = SplitLines(text);
  std::vector<std::optional<SceneGraph>> parsed(lines.size());
  std::vector<std::exception_ptr> errors(lines.size());
  ParallelFor(lines.size(), threads, [&](std::size_t i) {
    try {
      parsed[i] = ParseLine(lines[i], vocabulary);
    } catch (const Error&) {
      errors[i] = std::current_exception();
    } catch (const std::exception& e) {
      errors[i] = std::make_exception_ptr(ParseError(lines[i].number, e.what()));
    }
  });
  DatasetSplit split;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    if (split.Find(parsed[i]->image_id) != nullptr) {
      throw DuplicateError("line " + std::to_string(lines[i].number) +
                           ": duplicate image_id \"" + parsed[i]->image_id +
                           "\"");
    }
    split.Add(std::move(*parsed[i]));
  }
  return split;
}

DatasetSplit ReadSceneGraphs(const std::filesystem::path& path,
                             const Vocabulary& vocabulary, int threads) {
  DatasetSplit split = ParseSceneGraphs(ReadFile(path), vocabulary, threads);
  split.set_name(path.stem().string());
  return split;
}

std::string SceneGraphLine(const SceneGraph& graph,
                           const Vocabulary& vocabulary) {
  if (graph.image_id.empty() ||
      graph.image_id.find_first_of("\t\n\r") != std::string::npos) {
    throw ContractError("image_id must be non-empty without tabs or newlines");
  }
  ordered_json payload;
  payload["objects"] = ordered_json::array();
  payload["relations"] = ordered_json::array();
  for (const auto& obj : graph.objects) {
    ordered_json o;
    o["box"] = {obj.box.x1(), obj.box.y1(), obj.box.x2(), obj.box.y2()};
    o["label"] = vocabulary.ObjectLabel(obj.label);
    o["score"] = obj.score;
    payload["objects"].push_back(std::move(o));
  }
  for (const auto& rel : graph.relations) {
    ordered_json r;
    r["sub"] = rel.subject_idx;
    r["obj"] = rel.object_idx;
    r["pred"] = vocabulary.PredicateLabel(rel.predicate);
    r["score"] = rel.score;
    payload["relations"].push_back(std::move(r));
  }
  try {
    return graph.image_id + "\t" + payload.dump();
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("cannot serialize graph: ") + e.what());
  }
}

void WriteSceneGraphs(std::ostream& out, const DatasetSplit& split,
                      const Vocabulary& vocabulary) {
  for (const SceneGraph& graph : split) {
    out << SceneGraphLine(graph, vocabulary) << '\n';
  }
}

void WriteSceneGraphs(const std::filesystem::path& path,
                      const DatasetSplit& split, const Vocabulary& vocabulary) {
  std::ostringstream out;
  WriteSceneGraphs(out, split, vocabulary);
  WriteFile(path, out.str());
}

Vocabulary ParseVocabulary(std::string_view text) {
  std::vector<std::string> sections[2];
  int section = 0;
  bool saw_separator = false;
  for (const Line& line : SplitLines(text)) {
    if (line.text == "--") {
      if (saw_separator) throw ParseError(line.number, "more than one \"--\" separator");
      saw_separator = true;
      section = 1;
      continue;
    }
    sections[section].emplace_back(line.text);
  }
  if (!saw_separator) {
    throw ParseError(0, "vocabulary file lacks the \"--\" section separator");
  }
  return Vocabulary(std::move(sections[0]), std::move(sections[1]));
}

Vocabulary ReadVocabulary(const std::filesystem::path& path) {
  return ParseVocabulary(ReadFile(path));
}

std::string FormatVocabulary(const Vocabulary& vocabulary) {
  std::string out;
  for (const auto& label : vocabulary.object_labels()) out += label + "\n";
  out += "--\n";
  for (const auto& label : vocabulary.predicate_labels()) out += label + "\n";
  return out;
}

void WriteVocabulary(const std::filesystem::path& path,
                     const Vocabulary& vocabulary) {
  WriteFile(path, FormatVocabulary(vocabulary));
}

Vocabulary InferVocabulary(std::string_view text) {
  std::vector<std::string> objects, predicates;
  std::unordered_set<std::string> seen_objects, seen_predicates;
  for (const Line& line : SplitLines(text)) {
    const std::size_t tab = line.text.find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(line.number, "expected image_id<TAB>payload");
    }
    const auto payload =
        nlohmann::json::parse(line.text.substr(tab + 1), nullptr, false);
    if (payload.is_discarded() || !payload.is_object()) {
      throw ParseError(line.number, "payload is not a JSON object");
    }
    const auto& objs = RequireMember(payload, "objects", line.number);
    const auto& rels = RequireMember(payload, "relations", line.number);
    if (!objs.is_array() || !rels.is_array()) {
      throw ParseError(line.number, "\"objects\" and \"relations\" must be arrays");
    }
    for (const auto& o : objs) {
      if (!o.is_object()) throw ParseError(line.number, "object must be a JSON object");
      const auto& label = RequireString(RequireMember(o, "label", line.number),
                                        line.number, "label");
      if (seen_objects.insert(label).second) objects.push_back(label);
    }
    for (const auto& r : rels) {
      if (!r.is_object()) throw ParseError(line.number, "relation must be a JSON object");
      const auto& pred = RequireString(RequireMember(r, "pred", line.number),
                                       line.number, "pred");
      if (seen_predicates.insert(pred).second) predicates.push_back(pred);
    }
  }
  return Vocabulary(std::move(objects), std::move(predicates));
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format \"" + std::string(name) + "\"");
}

std::string FormatReport(const MetricReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kTsv) {
    out = "metric\tvalue\n";
    for (const auto& [key, value] : report) {
      out += key + "\t" + FormatValue(value) + "\n";
    }
    return out;
  }
  if (report.empty()) return "{}\n";
  out = "{\n";
  bool first = true;
  for (const auto& [key, value] : report) {
    if (!first) out += ",\n";
    first = false;
    out += "  " + nlohmann::json(key).dump() + ": " + FormatValue(value);
  }
  out += "\n}\n";
  return out;
}

void WriteReport(const MetricReport& report,
                 const std::filesystem::path& path, ReportFormat format) {
  WriteFile(path, FormatReport(report, format));
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path.string() + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading \"" + path.string() + "\"");
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + path.string() + "\" for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw IoError("error writing \"" + path.string() + "\"");
}

}  // namespace sgg
