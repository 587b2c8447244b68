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
#ifndef SGG_COMPARE_H_
#define SGG_COMPARE_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgg/core.h"

namespace sgg {

enum class ComparisonKind { kSimilarity, kEnsembleAccuracy };
ComparisonKind ParseComparisonKind(std::string_view name);  // "similarity", "ensemble"

// How two models' object instances are identified with each other.
//  kExactBox: label plus box coordinates rounded to 2 decimals. Models that
//    share one detector produce bit-identical boxes.
//  kIou: greedy same-label triplet matching at IoU >= 0.5, for inputs from
//    different detectors.
enum class InstanceIdentity { kExactBox, kIou };

// Square model-by-model table on a 0-100 scale, row-major.
struct ComparisonMatrix {
  ComparisonKind kind = ComparisonKind::kSimilarity;
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return names.size(); }
  double at(std::size_t row, std::size_t col) const {
    return values[row * names.size() + col];
  }
  // Header `model<TAB>name...`, then one row per model, 4 decimals.
  std::string ToTsv() const;
};

// Jaccard similarity (x100) of the two models' triplet sets pooled over all
// images. Both inputs are first reduced to one predicate per ordered pair.
// Two empty sets are 100. Throws AlignmentError on differing image sets.
double PairwiseSimilarity(const DatasetSplit& a, const DatasetSplit& b,
                          InstanceIdentity identity = InstanceIdentity::kExactBox,
                          int threads = 1);

// Share (x100) of GT relations whose predicate equals model a's or model b's
// top-1 predicate on that ordered pair. EnsembleAccuracy(a, a, gt) is a's own
// predicate accuracy. Both models must carry the GT object lists (predcls);
// otherwise TaskContractError.
double EnsembleAccuracy(const DatasetSplit& a, const DatasetSplit& b,
                        const DatasetSplit& ground_truth, int threads = 1);

ComparisonMatrix SimilarityMatrix(
    std::vector<std::string> names, std::span<const DatasetSplit> models,
    InstanceIdentity identity = InstanceIdentity::kExactBox, int threads = 1);
ComparisonMatrix EnsembleMatrix(std::vector<std::string> names,
                                std::span<const DatasetSplit> models,
                                const DatasetSplit& ground_truth,
                                int threads = 1);

}  // namespace sgg

#endif  // SGG_COMPARE_H_
