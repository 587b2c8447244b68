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
#ifndef SGG_MATCHING_H_
#define SGG_MATCHING_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "sgg/core.h"

namespace sgg {

// Intersection over union; 0 when the union is empty.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Smallest box enclosing both arguments.
BoundingBox PhraseBox(const BoundingBox& a, const BoundingBox& b);

// A relation with its boxes and labels resolved from the object list.
struct ResolvedTriplet {
  BoundingBox subject_box;
  int subject_label = 0;
  BoundingBox object_box;
  int object_label = 0;
  int predicate = 0;
  double score = 1.0;
  int subject_idx = 0;
  int object_idx = 0;
};

// Relations of `graph` in input order.
std::vector<ResolvedTriplet> ResolveTriplets(const SceneGraph& graph);

// Relations of `graph` sorted for ranking: TripletScore descending, then
// subject index, object index, predicate, and input position ascending.
std::vector<ResolvedTriplet> RankTriplets(const SceneGraph& graph);

enum class MatchCriterion {
  kTriplet,     // labels + predicate, both boxes clear the threshold
  kPhrase,      // labels + predicate, enclosing boxes clear the threshold
  kPair,        // kTriplet without the predicate
  kPhrasePair,  // kPhrase without the predicate
};

struct MatchOptions {
  MatchCriterion criterion = MatchCriterion::kTriplet;
  double iou_threshold = 0.5;
  // Ground-truth boxes given (predcls/sgcls): localization is decided by
  // equal subject/object indices instead of IoU.
  bool match_by_index = false;
};

struct MatchResult {
  // (prediction index, ground-truth index), in prediction rank order.
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;
  std::vector<std::size_t> unmatched_gt;
};

// Greedy assignment. Predictions are scanned in the given order, which must
// be descending rank. Each takes the unmatched eligible ground truth with the
// best localization quality (min of subject/object IoU, or phrase IoU), ties
// going to the lowest ground-truth index.
MatchResult MatchTriplets(std::span<const ResolvedTriplet> predictions,
                          std::span<const ResolvedTriplet> ground_truth,
                          const MatchOptions& options);

// Localization quality of `pred` against `gt` under `options`, or a negative
// value when `gt` is not eligible for `pred`.
double MatchQuality(const ResolvedTriplet& pred, const ResolvedTriplet& gt,
                    const MatchOptions& options);

}  // namespace sgg

#endif  // SGG_MATCHING_H_
