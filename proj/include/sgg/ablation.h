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
#ifndef SGG_ABLATION_H_
#define SGG_ABLATION_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgg/core.h"
#include "sgg/ingest.h"
#include "sgg/relation_source.h"

namespace sgg {

// Information ordering: each level hands the relation predictor strictly
// more ground truth than the previous one.
enum class AblationLevel { kPredictedObjects, kGtObjects, kGtObjectsGtPairs };

// "predicted", "gt-objects", "gt-pairs".
std::string_view AblationLevelName(AblationLevel level);
AblationLevel ParseAblationLevel(std::string_view name);

enum class AblationMetric { kVg, kOi };
AblationMetric ParseAblationMetric(std::string_view name);  // "vg", "oi"

// Ground-truth objects (score 1.0) with no relations; the harness re-runs the
// relation source on the result.
SceneGraph SubstituteGtObjects(const SceneGraph& prediction,
                               const SceneGraph& ground_truth);

// Keeps relations on ordered pairs that carry a GT relation, and gives every
// GT pair at least as many predictions as it has GT relations (when the
// source can supply them): missed pairs get the source's top predicates, or
// its fallback predicate with score 0 when it offers none.
// Throws HarnessOrderError unless `prediction` already holds the GT objects.
SceneGraph RestrictToGtPairs(const SceneGraph& prediction,
                             const SceneGraph& ground_truth,
                             const RelationSource& source,
                             const EvalConfig& config);

// Relation predictions read from files. The graph for an image is used as-is
// when its objects equal the objects handed in; otherwise its relations are
// carried onto the given objects through best-IoU (>= 0.5), same-label
// object correspondences. `on_gt_objects`, when present, holds predictions
// made on ground-truth objects and is preferred when its objects match.
class FileRelationSource : public RelationSource {
 public:
  explicit FileRelationSource(
      DatasetSplit predictions,
      std::optional<DatasetSplit> on_gt_objects = std::nullopt);

  SceneGraph Predict(const SceneGraph& objects_only,
                     const EvalConfig& config) const override;
  std::vector<ScoredPredicate> PairDistribution(
      const SceneGraph& graph, int subject_idx, int object_idx) const override;
  int FallbackPredicate() const override { return fallback_; }

 private:
  DatasetSplit predictions_;
  std::optional<DatasetSplit> on_gt_objects_;
  int fallback_ = 0;
};

// Evaluates `predictions` with the chosen metric. VG reports use task-free
// keys ("recall@K") so levels evaluated under different tasks line up.
MetricReport EvaluateMetric(const DatasetSplit& predictions,
                            const DatasetSplit& ground_truth,
                            AblationMetric metric, const EvalConfig& config);

struct AblationResult {
  std::vector<std::pair<AblationLevel, MetricReport>> levels;
  // Field-wise report(levels[i + 1]) - report(levels[i]).
  std::vector<MetricReport> deltas;

  // "<level>/<field>" and "delta/<from>-><to>/<field>" keys.
  MetricReport Flatten() const;
};

// The predicted-objects level runs the source on `detections` and evaluates
// under `config`. The ground-truth levels substitute GT objects (and, for
// kGtObjectsGtPairs, restrict to GT pairs) and evaluate as predcls, matching
// by object index.
AblationResult RunAblation(const DatasetSplit& ground_truth,
                           const DatasetSplit& detections,
                           const RelationSource& source,
                           std::span<const AblationLevel> levels,
                           AblationMetric metric, const EvalConfig& config);

}  // namespace sgg

#endif  // SGG_ABLATION_H_
