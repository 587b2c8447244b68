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
#ifndef SGG_VG_METRICS_H_
#define SGG_VG_METRICS_H_

#include <map>
#include <string>

#include "sgg/core.h"
#include "sgg/ingest.h"

namespace sgg {

// Recall@K on a 0-100 scale for one task.
struct VgRecallReport {
  Task task = Task::kSgDet;
  std::map<int, double> recall_at;  // K -> recall

  // Keys "<task>@<K>", e.g. "sgdet@50".
  MetricReport ToReport() const;
};

// Per image: mode filtering, ranking by triplet score, truncation to the top
// K, greedy triplet matching; recall = matched / GT relations. The mean is
// taken over images with at least one GT relation (or pooled when
// config.recall_averaging is kMicro) and scaled to 0-100.
//
// Throws AlignmentError on differing image sets and TaskContractError when a
// predcls/sgcls prediction does not carry the GT object list.
VgRecallReport VgRecall(const DatasetSplit& predictions,
                        const DatasetSplit& ground_truth,
                        const EvalConfig& config);

}  // namespace sgg

#endif  // SGG_VG_METRICS_H_
