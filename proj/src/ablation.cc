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
#include "sgg/ablation.h"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "sgg/errors.h"
#include "sgg/matching.h"
#include "sgg/oi_metrics.h"
#include "sgg/parallel.h"
#include "sgg/vg_metrics.h"

namespace sgg {
namespace {

// Best same-label input object with IoU >= 0.5 for each file object, or -1.
std::vector<int> CorrespondObjects(std::span<const DetectedObject> from,
                                   std::span<const DetectedObject> to) {
  std::vector<int> map(from.size(), -1);
  for (std::size_t i = 0; i < from.size(); ++i) {
    double best = -1.0;
    for (std::size_t j = 0; j < to.size(); ++j) {
      if (to[j].label != from[i].label) continue;
      const double iou = Iou(from[i].box, to[j].box);
      if (iou >= 0.5 && iou > best) {
        best = iou;
        map[i] = static_cast<int>(j);
      }
    }
  }
  return map;
}

DatasetSplit BuildLevel(const std::vector<AlignedPair>& pairs,
                        const RelationSource& source, AblationLevel level,
                        const EvalConfig& config) {
  std::vector<SceneGraph> graphs(pairs.size());
  ParallelFor(pairs.size(), config.threads, [&](std::size_t i) {
    const SceneGraph& det = *pairs[i].prediction;
    const SceneGraph& gt = *pairs[i].ground_truth;
    if (level == AblationLevel::kPredictedObjects) {
      graphs[i] = source.Predict(det, config);
      return;
    }
    SceneGraph with_gt = source.Predict(SubstituteGtObjects(det, gt), config);
    if (level == AblationLevel::kGtObjectsGtPairs) {
      with_gt = RestrictToGtPairs(with_gt, gt, source, config);
    }
    graphs[i] = std::move(with_gt);
  });
  DatasetSplit split(std::string(AblationLevelName(level)));
  for (auto& g : graphs) split.Add(std::move(g));
  return split;
}

}  // namespace

std::string_view AblationLevelName(AblationLevel level) {
  switch (level) {
    case AblationLevel::kPredictedObjects:
      return "predicted";
    case AblationLevel::kGtObjects:
      return "gt-objects";
    case AblationLevel::kGtObjectsGtPairs:
      return "gt-pairs";
  }
  return "predicted";
}

AblationLevel ParseAblationLevel(std::string_view name) {
  if (name == "predicted" || name == "predicted-objects") {
    return AblationLevel::kPredictedObjects;
  }
  if (name == "gt-objects") return AblationLevel::kGtObjects;
  if (name == "gt-pairs") return AblationLevel::kGtObjectsGtPairs;
  throw ConfigError("unknown ablation level \"" + std::string(name) + "\"");
}

AblationMetric ParseAblationMetric(std::string_view name) {
  if (name == "vg") return AblationMetric::kVg;
  if (name == "oi") return AblationMetric::kOi;
  throw ConfigError("unknown metric \"" + std::string(name) + "\"");
}

SceneGraph SubstituteGtObjects(const SceneGraph& prediction,
                               const SceneGraph& ground_truth) {
  SceneGraph out;
  out.image_id = prediction.image_id.empty() ? ground_truth.image_id
                                             : prediction.image_id;
  out.objects = ground_truth.objects;
  for (auto& obj : out.objects) obj.score = 1.0;
  return out;
}

SceneGraph RestrictToGtPairs(const SceneGraph& prediction,
                             const SceneGraph& ground_truth,
                             const RelationSource& source,
                             const EvalConfig& config) {
  if (!SameObjects(prediction.objects, ground_truth.objects)) {
    throw HarnessOrderError("image \"" + ground_truth.image_id +
                            "\": restrict_to_gt_pairs requires ground-truth "
                            "objects; substitute them first");
  }
  std::map<std::pair<int, int>, std::size_t> multiplicity;
  std::vector<std::pair<int, int>> gt_pairs;  // first-appearance order
  for (const auto& rel : ground_truth.relations) {
    if (multiplicity[{rel.subject_idx, rel.object_idx}]++ == 0) {
      gt_pairs.emplace_back(rel.subject_idx, rel.object_idx);
    }
  }

  SceneGraph out;
  out.image_id = prediction.image_id;
  out.objects = prediction.objects;
  std::map<std::pair<int, int>, std::set<int>> present;
  for (const auto& rel : prediction.relations) {
    const std::pair<int, int> pair{rel.subject_idx, rel.object_idx};
    if (multiplicity.count(pair) == 0) continue;
    out.relations.push_back(rel);
    present[pair].insert(rel.predicate);
  }

  const std::size_t keep =
      static_cast<std::size_t>(config.EffectiveMaxPredicates());
  for (const auto& pair : gt_pairs) {
    std::set<int>& have = present[pair];
    const std::size_t target =
        have.empty() ? std::max(keep, multiplicity[pair]) : multiplicity[pair];
    if (have.size() >= target) continue;
    for (const ScoredPredicate& sp :
         source.PairDistribution(out, pair.first, pair.second)) {
      if (have.size() >= target) break;
      if (!have.insert(sp.predicate).second) continue;
      out.relations.push_back({pair.first, pair.second, sp.predicate,
                               std::clamp(sp.score, 0.0, 1.0)});
    }
    if (have.empty()) {
      const int fallback = source.FallbackPredicate();
      have.insert(fallback);
      out.relations.push_back({pair.first, pair.second, fallback, 0.0});
    }
  }
  return out;
}

FileRelationSource::FileRelationSource(DatasetSplit predictions,
                                       std::optional<DatasetSplit> on_gt_objects)
    : predictions_(std::move(predictions)),
      on_gt_objects_(std::move(on_gt_objects)) {
  std::map<int, std::size_t> counts;
  for (const auto& g : predictions_) {
    for (const auto& rel : g.relations) ++counts[rel.predicate];
  }
  std::size_t best = 0;
  for (const auto& [predicate, count] : counts) {
    if (count > best) {
      best = count;
      fallback_ = predicate;
    }
  }
}

SceneGraph FileRelationSource::Predict(const SceneGraph& objects_only,
                                       const EvalConfig&) const {
  SceneGraph out;
  out.image_id = objects_only.image_id;
  out.objects = objects_only.objects;
  if (on_gt_objects_) {
    const SceneGraph* g = on_gt_objects_->Find(objects_only.image_id);
    if (g != nullptr && SameObjects(g->objects, objects_only.objects)) {
      out.relations = g->relations;
      return out;
    }
  }
  const SceneGraph* file = predictions_.Find(objects_only.image_id);
  if (file == nullptr) return out;
  if (SameObjects(file->objects, objects_only.objects)) {
    out.relations = file->relations;
    return out;
  }
  const std::vector<int> map = CorrespondObjects(file->objects, out.objects);
  std::map<std::tuple<int, int, int>, double> best;
  std::vector<std::tuple<int, int, int>> order;
  for (const auto& rel : file->relations) {
    const int s = map[rel.subject_idx];
    const int o = map[rel.object_idx];
    if (s < 0 || o < 0 || s == o) continue;
    const auto key = std::make_tuple(s, o, rel.predicate);
    auto [it, inserted] = best.emplace(key, rel.score);
    if (inserted) {
      order.push_back(key);
    } else {
      it->second = std::max(it->second, rel.score);
    }
  }
  for (const auto& key : order) {
    out.relations.push_back({std::get<0>(key), std::get<1>(key),
                             std::get<2>(key), best[key]});
  }
  return out;
}

std::vector<ScoredPredicate> FileRelationSource::PairDistribution(
    const SceneGraph& graph, int subject_idx, int object_idx) const {
  const SceneGraph predicted = Predict(graph, EvalConfig());
  std::vector<ScoredPredicate> out;
  for (const auto& rel : predicted.relations) {
    if (rel.subject_idx == subject_idx && rel.object_idx == object_idx) {
      out.push_back({rel.predicate, rel.score});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredPredicate& a, const ScoredPredicate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.predicate < b.predicate;
            });
  return out;
}

MetricReport EvaluateMetric(const DatasetSplit& predictions,
                            const DatasetSplit& ground_truth,
                            AblationMetric metric, const EvalConfig& config) {
  if (metric == AblationMetric::kOi) {
    return OiEvaluate(predictions, ground_truth, config).ToReport();
  }
  MetricReport report;
  for (const auto& [k, value] :
       VgRecall(predictions, ground_truth, config).recall_at) {
    report["recall@" + std::to_string(k)] = value;
  }
  return report;
}

MetricReport AblationResult::Flatten() const {
  MetricReport flat;
  for (const auto& [level, report] : levels) {
    for (const auto& [key, value] : report) {
      flat[std::string(AblationLevelName(level)) + "/" + key] = value;
    }
  }
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const std::string prefix =
        "delta/" + std::string(AblationLevelName(levels[i].first)) + "->" +
        std::string(AblationLevelName(levels[i + 1].first)) + "/";
    for (const auto& [key, value] : deltas[i]) flat[prefix + key] = value;
  }
  return flat;
}

AblationResult RunAblation(const DatasetSplit& ground_truth,
                           const DatasetSplit& detections,
                           const RelationSource& source,
                           std::span<const AblationLevel> levels,
                           AblationMetric metric, const EvalConfig& config) {
  config.Validate();
  const std::vector<AlignedPair> pairs = AlignSplits(detections, ground_truth);
  AblationResult result;
  for (AblationLevel level : levels) {
    const DatasetSplit predictions = BuildLevel(pairs, source, level, config);
    result.levels.emplace_back(
        level, EvaluateMetric(predictions, ground_truth, metric, config));
  }
  for (std::size_t i = 0; i + 1 < result.levels.size(); ++i) {
    MetricReport delta;
    for (const auto& [key, value] : result.levels[i + 1].second) {
      auto it = result.levels[i].second.find(key);
      if (it != result.levels[i].second.end()) delta[key] = value - it->second;
    }
    result.deltas.push_back(std::move(delta));
  }
  return result;
}

}  // namespace sgg
