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
#include "sgg/adapters.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sgg/checksum.h"
#include "sgg/errors.h"
#include "sgg/ingest.h"

namespace sgg {
namespace {

constexpr std::string_view kOiHeader =
    "ImageID,LabelName1,LabelName2,XMin1,XMax1,YMin1,YMax1,XMin2,XMax2,YMin2,"
    "YMax2,RelationshipLabel";

std::vector<std::string> SplitCsv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view() : text.substr(end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
  }
  return lines;
}

double ParseCoordinate(const std::string& field, std::string_view record) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw AdapterError("bad coordinate \"" + field + "\" in record: " +
                       std::string(record));
  }
  return v;
}

struct RawObject {
  std::string label;
  double x1, y1, x2, y2;
  auto Key() const { return std::tie(label, x1, y1, x2, y2); }
};

struct RawGraph {
  std::string image_id;
  std::vector<RawObject> objects;
  std::vector<std::tuple<int, int, std::string>> relations;
};

int InternObject(RawGraph& graph, RawObject obj) {
  for (std::size_t i = 0; i < graph.objects.size(); ++i) {
    if (graph.objects[i].Key() == obj.Key()) return static_cast<int>(i);
  }
  graph.objects.push_back(std::move(obj));
  return static_cast<int>(graph.objects.size()) - 1;
}

void CheckDisjoint(const std::vector<DatasetSplit>& splits) {
  std::unordered_map<std::string, std::string> owner;
  for (const DatasetSplit& split : splits) {
    for (const SceneGraph& g : split) {
      auto [it, inserted] = owner.emplace(g.image_id, split.name());
      if (!inserted) {
        throw AdapterError("image \"" + g.image_id + "\" appears in splits \"" +
                           it->second + "\" and \"" + split.name() + "\"");
      }
    }
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

AdapterManifest AdapterManifest::FromJson(std::string_view json_text,
                                          const std::filesystem::path& base_dir) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("adapter manifest must be a JSON object");
  }
  AdapterManifest m;
  try {
    m.format = j.at("format").get<std::string>();
    if (j.contains("inputs")) {
      for (const auto& [key, value] : j.at("inputs").items()) {
        m.inputs[key] = Resolve(base_dir, value.get<std::string>());
      }
    }
    m.vocabulary_out = Resolve(base_dir, j.at("vocabulary_out").get<std::string>());
    for (const auto& s : j.at("splits")) {
      AdapterSplit split;
      split.name = s.at("name").get<std::string>();
      if (s.contains("source")) split.source = Resolve(base_dir, s.at("source").get<std::string>());
      if (s.contains("split_flag")) split.split_flag = s.at("split_flag").get<int>();
      split.out = Resolve(base_dir, s.at("out").get<std::string>());
      m.splits.push_back(std::move(split));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed adapter manifest: ") + e.what());
  }
  return m;
}

std::string ConversionReport::ToJson() const {
  nlohmann::ordered_json j;
  j["format"] = format;
  j["object_labels"] = object_labels;
  j["predicate_labels"] = predicate_labels;
  j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : splits) {
    j["splits"].push_back({{"name", s.name},
                           {"images", s.images},
                           {"objects", s.objects},
                           {"relations", s.relations}});
  }
  j["input_sha256"] = nlohmann::ordered_json::object();
  for (const auto& [path, digest] : input_sha256) j["input_sha256"][path] = digest;
  return j.dump(2) + "\n";
}

namespace internal {

Conversion ConvertOpenImages(const AdapterManifest& manifest) {
  Conversion conv;
  conv.report.format = manifest.format;
  std::unordered_map<std::string, std::string> names;
  if (auto it = manifest.inputs.find("class_descriptions"); it != manifest.inputs.end()) {
    const std::string text = ReadFile(it->second);
    conv.report.input_sha256[it->second.string()] = Sha256Hex(text);
    for (std::string_view line : Lines(text)) {
      if (line.empty()) continue;
      const auto fields = SplitCsv(line);
      if (fields.size() != 2) {
        throw AdapterError("unrecognized class-description record: " + std::string(line));
      }
      names[fields[0]] = fields[1];
    }
  }
  auto display = [&](const std::string& id) {
    auto it = names.find(id);
    return it == names.end() ? id : it->second;
  };

  std::vector<std::vector<RawGraph>> raw(manifest.splits.size());
  std::set<std::string> object_labels, predicate_labels;
  for (std::size_t s = 0; s < manifest.splits.size(); ++s) {
    const std::string text = ReadFile(manifest.splits[s].source);
    conv.report.input_sha256[manifest.splits[s].source.string()] = Sha256Hex(text);
    const auto lines = Lines(text);
    std::unordered_map<std::string, std::size_t> by_image;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const std::string_view line = lines[i];
      if (i == 0) {
        if (line != kOiHeader) {
          throw AdapterError("unrecognized OI-VRD header: " + std::string(line));
        }
        continue;
      }
      if (line.empty()) continue;
      const auto f = SplitCsv(line);
      if (f.size() != 12 || f[0].empty()) {
        throw AdapterError("unrecognized OI-VRD record: " + std::string(line));
      }
      if (f[11] == "is") continue;
      double c[8];
      for (int k = 0; k < 8; ++k) c[k] = ParseCoordinate(f[3 + k], line);
      // Columns are XMin, XMax, YMin, YMax.
      if (c[0] > c[1] || c[2] > c[3] || c[4] > c[5] || c[6] > c[7]) {
        throw AdapterError("invalid box in OI-VRD record: " + std::string(line));
      }
      auto [it, inserted] = by_image.emplace(f[0], raw[s].size());
      if (inserted) raw[s].push_back({f[0], {}, {}});
      RawGraph& g = raw[s][it->second];
      const std::string subject = display(f[1]);
      const std::string object = display(f[2]);
      const int si = InternObject(g, {subject, c[0], c[2], c[1], c[3]});
      const int oi = InternObject(g, {object, c[4], c[6], c[5], c[7]});
      if (si == oi) {
        throw AdapterError("relation between identical boxes: " + std::string(line));
      }
      auto rel = std::make_tuple(si, oi, f[11]);
      if (std::find(g.relations.begin(), g.relations.end(), rel) == g.relations.end()) {
        g.relations.push_back(std::move(rel));
      }
      object_labels.insert(subject);
      object_labels.insert(object);
      predicate_labels.insert(f[11]);
    }
  }

  conv.vocabulary = Vocabulary({object_labels.begin(), object_labels.end()},
                               {predicate_labels.begin(), predicate_labels.end()});
  for (std::size_t s = 0; s < manifest.splits.size(); ++s) {
    DatasetSplit split(manifest.splits[s].name);
    for (const RawGraph& rg : raw[s]) {
      SceneGraph g;
      g.image_id = rg.image_id;
      for (const RawObject& o : rg.objects) {
        g.objects.push_back({BoundingBox(o.x1, o.y1, o.x2, o.y2),
                             *conv.vocabulary.FindObject(o.label), 1.0});
      }
      for (const auto& [si, oi, pred] : rg.relations) {
        g.relations.push_back({si, oi, *conv.vocabulary.FindPredicate(pred), 1.0});
      }
      split.Add(std::move(g));
    }
    conv.splits.push_back(std::move(split));
  }
  return conv;
}

}  // namespace internal

Conversion ConvertDataset(const AdapterManifest& manifest) {
  Conversion conv;
  if (manifest.format == "oi-vrd-2018") {
    conv = internal::ConvertOpenImages(manifest);
  } else if (manifest.format == "vg-sgg-h5") {
    conv = internal::ConvertVisualGenomeH5(manifest);
  } else {
    throw AdapterError("unrecognized source format \"" + manifest.format + "\"");
  }
  CheckDisjoint(conv.splits);
  conv.report.format = manifest.format;
  conv.report.object_labels = conv.vocabulary.object_labels().size();
  conv.report.predicate_labels = conv.vocabulary.predicate_labels().size();
  conv.report.splits.clear();
  for (const DatasetSplit& split : conv.splits) {
    SplitCounts counts{split.name(), split.size(), 0, 0};
    for (const SceneGraph& g : split) {
      ValidateSceneGraph(g, &conv.vocabulary);
      counts.objects += g.objects.size();
      counts.relations += g.relations.size();
    }
    conv.report.splits.push_back(counts);
  }
  return conv;
}

ConversionReport Convert(const AdapterManifest& manifest) {
  Conversion conv = ConvertDataset(manifest);
  WriteVocabulary(manifest.vocabulary_out, conv.vocabulary);
  for (std::size_t s = 0; s < conv.splits.size(); ++s) {
    WriteSceneGraphs(manifest.splits[s].out, conv.splits[s], conv.vocabulary);
  }
  return conv.report;
}

}  // namespace sgg
