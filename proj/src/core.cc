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
#include "sgg/core.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "sgg/errors.h"

namespace sgg {
namespace {

bool ValidScore(double s) { return std::isfinite(s) && s >= 0.0 && s <= 1.0; }

std::unordered_map<std::string, int> BuildIndex(
    const std::vector<std::string>& labels, const char* kind) {
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], static_cast<int>(i)).second) {
      throw DuplicateError(std::string("duplicate ") + kind + " label \"" +
                           labels[i] + "\"");
    }
  }
  return index;
}

}  // namespace

BoundingBox::BoundingBox(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!std::isfinite(x1) || !std::isfinite(y1) || !std::isfinite(x2) ||
      !std::isfinite(y2)) {
    throw ContractError("box coordinates must be finite");
  }
  if (x1 > x2 || y1 > y2) {
    throw ContractError("invalid box: requires x1 <= x2 and y1 <= y2");
  }
}

Vocabulary::Vocabulary(std::vector<std::string> object_labels,
                       std::vector<std::string> predicate_labels)
    : object_labels_(std::move(object_labels)),
      predicate_labels_(std::move(predicate_labels)),
      object_index_(BuildIndex(object_labels_, "object")),
      predicate_index_(BuildIndex(predicate_labels_, "predicate")) {}

std::optional<int> Vocabulary::FindObject(std::string_view label) const {
  auto it = object_index_.find(std::string(label));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Vocabulary::FindPredicate(std::string_view label) const {
  auto it = predicate_index_.find(std::string(label));
  if (it == predicate_index_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::ObjectLabel(int index) const {
  if (index < 0 || index >= num_objects()) {
    throw IndexError("object label index " + std::to_string(index) +
                     " out of range");
  }
  return object_labels_[index];
}

const std::string& Vocabulary::PredicateLabel(int index) const {
  if (index < 0 || index >= num_predicates()) {
    throw IndexError("predicate label index " + std::to_string(index) +
                     " out of range");
  }
  return predicate_labels_[index];
}

void ValidateSceneGraph(const SceneGraph& graph, const Vocabulary* vocabulary) {
  const int n = static_cast<int>(graph.objects.size());
  for (int i = 0; i < n; ++i) {
    const DetectedObject& obj = graph.objects[i];
    if (!ValidScore(obj.score)) {
      throw ContractError("object " + std::to_string(i) +
                          ": score must be in [0,1]");
    }
    if (obj.label < 0 ||
        (vocabulary != nullptr && obj.label >= vocabulary->num_objects())) {
      throw IndexError("object " + std::to_string(i) + ": label index " +
                       std::to_string(obj.label) + " out of range");
    }
  }
  for (std::size_t r = 0; r < graph.relations.size(); ++r) {
    const RelationPrediction& rel = graph.relations[r];
    if (rel.subject_idx < 0 || rel.subject_idx >= n || rel.object_idx < 0 ||
        rel.object_idx >= n) {
      throw IndexError("relation " + std::to_string(r) +
                       ": object reference out of range");
    }
    if (rel.subject_idx == rel.object_idx) {
      throw ContractError("relation " + std::to_string(r) +
                          ": subject and object must differ");
    }
    if (rel.predicate < 0 || (vocabulary != nullptr &&
                              rel.predicate >= vocabulary->num_predicates())) {
      throw IndexError("relation " + std::to_string(r) + ": predicate index " +
                       std::to_string(rel.predicate) + " out of range");
    }
    if (!ValidScore(rel.score)) {
      throw ContractError("relation " + std::to_string(r) +
                          ": score must be in [0,1]");
    }
  }
}

bool IsGroundTruth(const SceneGraph& graph) {
  return std::all_of(graph.objects.begin(), graph.objects.end(),
                     [](const DetectedObject& o) { return o.score == 1.0; }) &&
         std::all_of(graph.relations.begin(), graph.relations.end(),
                     [](const RelationPrediction& r) { return r.score == 1.0; });
}

bool SameObjects(std::span<const DetectedObject> a,
                 std::span<const DetectedObject> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].box != b[i].box || a[i].label != b[i].label) return false;
  }
  return true;
}

std::string_view TaskName(Task task) {
  switch (task) {
    case Task::kPredCls:
      return "predcls";
    case Task::kSgCls:
      return "sgcls";
    case Task::kSgDet:
      return "sgdet";
  }
  return "sgdet";
}

Task ParseTask(std::string_view name) {
  if (name == "predcls") return Task::kPredCls;
  if (name == "sgcls") return Task::kSgCls;
  if (name == "sgdet") return Task::kSgDet;
  throw ConfigError("unknown task \"" + std::string(name) + "\"");
}

std::string_view ModeName(Mode mode) {
  return mode == Mode::kConstrained ? "constrained" : "unconstrained";
}

Mode ParseMode(std::string_view name) {
  if (name == "constrained") return Mode::kConstrained;
  if (name == "unconstrained") return Mode::kUnconstrained;
  throw ConfigError("unknown mode \"" + std::string(name) + "\"");
}

int EvalConfig::EffectiveMaxPredicates() const {
  return mode == Mode::kConstrained ? 1 : max_predicates_per_pair;
}

void EvalConfig::Validate() const {
  if (max_predicates_per_pair <= 0) {
    throw ConfigError("max_predicates_per_pair must be positive");
  }
  for (int k : k_values) {
    if (k <= 0) throw ConfigError("K values must be positive");
  }
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("iou_threshold must be in [0,1]");
  }
  if (threads <= 0) throw ConfigError("threads must be positive");
}

EvalConfig EvalConfig::VisualGenome(Task task) {
  EvalConfig config;
  config.task = task;
  config.mode = Mode::kConstrained;
  config.max_predicates_per_pair = 1;
  config.k_values = {20, 50, 100};
  return config;
}

EvalConfig EvalConfig::OpenImages() {
  EvalConfig config;
  config.task = Task::kSgDet;
  config.mode = Mode::kUnconstrained;
  config.max_predicates_per_pair = 2;
  config.k_values = {50};
  return config;
}

double TripletScore(const RelationPrediction& rel,
                    std::span<const DetectedObject> objects) {
  const auto n = static_cast<int>(objects.size());
  if (rel.subject_idx < 0 || rel.subject_idx >= n || rel.object_idx < 0 ||
      rel.object_idx >= n) {
    throw IndexError("relation references object outside [0," +
                     std::to_string(n) + ")");
  }
  // Factors are multiplied in ascending order, so the product depends only on
  // their multiset.
  std::array<double, 3> factors = {objects[rel.subject_idx].score, rel.score,
                                   objects[rel.object_idx].score};
  std::sort(factors.begin(), factors.end());
  return factors[0] * factors[1] * factors[2];
}

SceneGraph ApplyMode(const SceneGraph& graph, const EvalConfig& config) {
  const int keep = config.EffectiveMaxPredicates();
  std::map<std::pair<int, int>, std::vector<std::size_t>> by_pair;
  for (std::size_t r = 0; r < graph.relations.size(); ++r) {
    const auto& rel = graph.relations[r];
    by_pair[{rel.subject_idx, rel.object_idx}].push_back(r);
  }
  std::vector<bool> survives(graph.relations.size(), false);
  for (auto& [pair, members] : by_pair) {
    std::stable_sort(members.begin(), members.end(),
                     [&](std::size_t a, std::size_t b) {
                       const auto& ra = graph.relations[a];
                       const auto& rb = graph.relations[b];
                       if (ra.score != rb.score) return ra.score > rb.score;
                       return ra.predicate < rb.predicate;
                     });
    const std::size_t n = std::min<std::size_t>(members.size(), keep);
    for (std::size_t i = 0; i < n; ++i) survives[members[i]] = true;
  }
  SceneGraph out;
  out.image_id = graph.image_id;
  out.objects = graph.objects;
  for (std::size_t r = 0; r < graph.relations.size(); ++r) {
    if (survives[r]) out.relations.push_back(graph.relations[r]);
  }
  return out;
}

void DatasetSplit::Add(SceneGraph graph) {
  if (!index_.emplace(graph.image_id, graphs_.size()).second) {
    throw DuplicateError("duplicate image_id \"" + graph.image_id + "\"");
  }
  graphs_.push_back(std::move(graph));
}

const SceneGraph* DatasetSplit::Find(std::string_view image_id) const {
  auto it = index_.find(std::string(image_id));
  return it == index_.end() ? nullptr : &graphs_[it->second];
}

SceneGraph* DatasetSplit::FindMutable(std::string_view image_id) {
  auto it = index_.find(std::string(image_id));
  return it == index_.end() ? nullptr : &graphs_[it->second];
}

std::vector<AlignedPair> AlignSplits(const DatasetSplit& predictions,
                                     const DatasetSplit& ground_truth) {
  std::vector<AlignedPair> pairs;
  pairs.reserve(ground_truth.size());
  for (const SceneGraph& gt : ground_truth) {
    const SceneGraph* pred = predictions.Find(gt.image_id);
    if (pred == nullptr) {
      throw AlignmentError("image \"" + gt.image_id +
                           "\" missing from predictions");
    }
    pairs.push_back({pred, &gt});
  }
  if (predictions.size() != ground_truth.size()) {
    for (const SceneGraph& pred : predictions) {
      if (ground_truth.Find(pred.image_id) == nullptr) {
        throw AlignmentError("image \"" + pred.image_id +
                             "\" missing from ground truth");
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const AlignedPair& a, const AlignedPair& b) {
              return a.ground_truth->image_id < b.ground_truth->image_id;
            });
  return pairs;
}

}  // namespace sgg
