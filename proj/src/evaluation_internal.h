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
#ifndef SGG_EVALUATION_INTERNAL_H_
#define SGG_EVALUATION_INTERNAL_H_

#include "sgg/core.h"
#include "sgg/matching.h"

namespace sgg::internal {

// predcls: prediction objects must equal the ground-truth boxes and labels.
// sgcls: boxes only. sgdet: anything. Throws TaskContractError.
void CheckTaskContract(const SceneGraph& prediction,
                       const SceneGraph& ground_truth, Task task);

inline MatchOptions OptionsFor(const EvalConfig& config,
                               MatchCriterion criterion) {
  MatchOptions options;
  options.criterion = criterion;
  options.iou_threshold = config.iou_threshold;
  options.match_by_index = config.task != Task::kSgDet;
  return options;
}

}  // namespace sgg::internal

#endif  // SGG_EVALUATION_INTERNAL_H_
