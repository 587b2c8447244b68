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
#include "sgg/matching.h"

#include <algorithm>
#include <numeric>

namespace sgg {

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  const double intersection = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double union_area = a.Area() + b.Area() - intersection;
  if (union_area <= 0.0) return 0.0;
  return std::clamp(intersection / union_area, 0.0, 1.0);
}

BoundingBox PhraseBox(const BoundingBox& a, const BoundingBox& b) {
  return BoundingBox(std::min(a.x1(), b.x1()), std::min(a.y1(), b.y1()),
                     std::max(a.x2(), b.x2()), std::max(a.y2(), b.y2()));
}

std::vector<ResolvedTriplet> ResolveTriplets(const SceneGraph& graph) {
  std::vector<ResolvedTriplet> out;
  out.reserve(graph.relations.size());
  for (const RelationPrediction& rel : graph.relations) {
    const double score = TripletScore(rel, graph.objects);
    const DetectedObject& s = graph.objects[rel.subject_idx];
    const DetectedObject& o = graph.objects[rel.object_idx];
    out.push_back({s.box, s.label, o.box, o.label, rel.predicate, score,
                   rel.subject_idx, rel.object_idx});
  }
  return out;
}

std::vector<ResolvedTriplet> RankTriplets(const SceneGraph& graph) {
  std::vector<ResolvedTriplet> resolved = ResolveTriplets(graph);
  std::vector<std::size_t> order(resolved.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ResolvedTriplet& ta = resolved[a];
    const ResolvedTriplet& tb = resolved[b];
    if (ta.score != tb.score) return ta.score > tb.score;
    if (ta.subject_idx != tb.subject_idx) return ta.subject_idx < tb.subject_idx;
    if (ta.object_idx != tb.object_idx) return ta.object_idx < tb.object_idx;
    if (ta.predicate != tb.predicate) return ta.predicate < tb.predicate;
    return a < b;
  });
  std::vector<ResolvedTriplet> ranked;
  ranked.reserve(resolved.size());
  for (std::size_t i : order) ranked.push_back(resolved[i]);
  return ranked;
}

double MatchQuality(const ResolvedTriplet& pred, const ResolvedTriplet& gt,
                    const MatchOptions& options) {
  if (pred.subject_label != gt.subject_label ||
      pred.object_label != gt.object_label) {
    return -1.0;
  }
  const bool needs_predicate = options.criterion == MatchCriterion::kTriplet ||
                               options.criterion == MatchCriterion::kPhrase;
  if (needs_predicate && pred.predicate != gt.predicate) return -1.0;

  if (options.match_by_index) {
    return (pred.subject_idx == gt.subject_idx &&
            pred.object_idx == gt.object_idx)
               ? 1.0
               : -1.0;
  }
  const bool phrase = options.criterion == MatchCriterion::kPhrase ||
                      options.criterion == MatchCriterion::kPhrasePair;
  if (phrase) {
    const double q = Iou(PhraseBox(pred.subject_box, pred.object_box),
                         PhraseBox(gt.subject_box, gt.object_box));
    return q >= options.iou_threshold ? q : -1.0;
  }
  const double sub = Iou(pred.subject_box, gt.subject_box);
  const double obj = Iou(pred.object_box, gt.object_box);
  if (sub < options.iou_threshold || obj < options.iou_threshold) return -1.0;
  return std::min(sub, obj);
}

MatchResult MatchTriplets(std::span<const ResolvedTriplet> predictions,
                          std::span<const ResolvedTriplet> ground_truth,
                          const MatchOptions& options) {
  MatchResult result;
  std::vector<bool> taken(ground_truth.size(), false);
  for (std::size_t p = 0; p < predictions.size(); ++p) {
    std::size_t best = ground_truth.size();
    double best_quality = -1.0;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g]) continue;
      const double q = MatchQuality(predictions[p], ground_truth[g], options);
      if (q >= 0.0 && q > best_quality) {
        best_quality = q;
        best = g;
      }
    }
    if (best < ground_truth.size()) {
      taken[best] = true;
      result.matched_pairs.emplace_back(p, best);
    }
  }
  for (std::size_t g = 0; g < ground_truth.size(); ++g) {
    if (!taken[g]) result.unmatched_gt.push_back(g);
  }
  return result;
}

}  // namespace sgg
