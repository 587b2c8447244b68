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
#include "sgg/vg_metrics.h"

#include <algorithm>
#include <vector>

#include "evaluation_internal.h"
#include "sgg/errors.h"
#include "sgg/matching.h"
#include "sgg/parallel.h"

namespace sgg {
namespace internal {

void CheckTaskContract(const SceneGraph& prediction,
                       const SceneGraph& ground_truth, Task task) {
  if (task == Task::kSgDet) return;
  const auto& p = prediction.objects;
  const auto& g = ground_truth.objects;
  bool ok = p.size() == g.size();
  for (std::size_t i = 0; ok && i < p.size(); ++i) {
    ok = p[i].box == g[i].box &&
         (task != Task::kPredCls || p[i].label == g[i].label);
  }
  if (!ok) {
    throw TaskContractError(
        "image \"" + ground_truth.image_id + "\": " + std::string(TaskName(task)) +
        " predictions must carry the ground-truth " +
        (task == Task::kPredCls ? "boxes and labels" : "boxes"));
  }
}

}  // namespace internal

MetricReport VgRecallReport::ToReport() const {
  MetricReport report;
  for (const auto& [k, value] : recall_at) {
    report[std::string(TaskName(task)) + "@" + std::to_string(k)] = value;
  }
  return report;
}

VgRecallReport VgRecall(const DatasetSplit& predictions,
                        const DatasetSplit& ground_truth,
                        const EvalConfig& config) {
  config.Validate();
  const std::vector<AlignedPair> pairs = AlignSplits(predictions, ground_truth);
  std::vector<int> ks = config.k_values;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  // matched[i][k]: GT relations of image i matched within the top ks[k].
  std::vector<std::vector<std::size_t>> matched(pairs.size());
  ParallelFor(pairs.size(), config.threads, [&](std::size_t i) {
    const SceneGraph& pred = *pairs[i].prediction;
    const SceneGraph& gt = *pairs[i].ground_truth;
    internal::CheckTaskContract(pred, gt, config.task);
    const auto ranked = RankTriplets(ApplyMode(pred, config));
    const auto gt_triplets = ResolveTriplets(gt);
    // Greedy decisions on a prefix never depend on later predictions, so one
    // pass serves every K.
    const MatchResult result = MatchTriplets(
        ranked, gt_triplets,
        internal::OptionsFor(config, MatchCriterion::kTriplet));
    matched[i].assign(ks.size(), 0);
    for (const auto& [p, g] : result.matched_pairs) {
      for (std::size_t k = 0; k < ks.size(); ++k) {
        if (p < static_cast<std::size_t>(ks[k])) ++matched[i][k];
      }
    }
  });

  VgRecallReport report;
  report.task = config.task;
  for (std::size_t k = 0; k < ks.size(); ++k) {
    double sum = 0.0;
    std::size_t images = 0, total_matched = 0, total_gt = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::size_t n_gt = pairs[i].ground_truth->relations.size();
      if (n_gt == 0) continue;
      sum += static_cast<double>(matched[i][k]) / static_cast<double>(n_gt);
      ++images;
      total_matched += matched[i][k];
      total_gt += n_gt;
    }
    double recall = 0.0;
    if (config.recall_averaging == RecallAveraging::kMacro) {
      recall = images > 0 ? sum / static_cast<double>(images) : 0.0;
    } else {
      recall = total_gt > 0 ? static_cast<double>(total_matched) /
                                  static_cast<double>(total_gt)
                            : 0.0;
    }
    report.recall_at[ks[k]] = 100.0 * recall;
  }
  return report;
}

}  // namespace sgg
