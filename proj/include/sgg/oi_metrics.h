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
#ifndef SGG_OI_METRICS_H_
#define SGG_OI_METRICS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sgg/core.h"
#include "sgg/ingest.h"

namespace sgg {

// Open Images VRD report. Every field is on a 0-100 scale.
struct OiReport {
  double score = 0.0;
  double recall_at_50 = 0.0;
  double wmap_triplet = 0.0;
  double map_triplet = 0.0;
  double wmap_phrase = 0.0;
  double map_phrase = 0.0;
  double triplet_proposal_recall = 0.0;
  double phrase_proposal_recall = 0.0;

  MetricReport ToReport() const;
};

// 0.2 * recall@50 + 0.4 * wmAP(triplet) + 0.4 * wmAP(phrase).
double OiScore(double recall_at_50, double wmap_triplet, double wmap_phrase);

struct RankedOutcome {
  double score = 0.0;
  bool true_positive = false;
};

// All-points interpolated average precision in [0,1]. The precision envelope
// is made monotone from the right and area is accumulated at each recall
// step. Returns 0 when num_gt is 0 and no true positives are claimed.
// Throws ContractError if scores are not descending or the true positives
// outnumber num_gt.
double AveragePrecision(std::span<const RankedOutcome> outcomes,
                        std::size_t num_gt);

// sum_p AP_p * n_p / sum_p n_p, scaled to 0-100. Predicates with n_p = 0 are
// skipped, as are predicates missing from `ap_by_predicate` (AP 0). Throws
// UndefinedMetricError when every count is zero.
double WeightedMap(const std::map<int, double>& ap_by_predicate,
                   const std::map<int, std::size_t>& gt_count_by_predicate);

// Unweighted mean AP over predicates with n_p > 0, scaled to 0-100. Throws
// UndefinedMetricError when every count is zero.
double MeanAp(const std::map<int, double>& ap_by_predicate,
              const std::map<int, std::size_t>& gt_count_by_predicate);

struct OiImageCounts {
  std::string image_id;
  std::size_t gt_relations = 0;
  std::size_t triplet_matched = 0;  // over all mode-filtered predictions
  std::size_t pair_matched = 0;
  std::size_t phrase_pair_matched = 0;
};

struct OiEvaluation {
  OiReport report;
  std::map<int, double> ap_triplet;
  std::map<int, double> ap_phrase;
  std::map<int, std::size_t> gt_count;
  std::vector<OiImageCounts> images;  // ascending image id
};

// Full OI evaluation. Recall@50 is per image over the top 50 (macro average
// unless config.recall_averaging is kMicro). APs rank each predicate's
// predictions over the whole split by (score desc, image id asc, rank asc).
// Proposal recalls pool GT relations matched under the pair and phrase-pair
// criteria. When the split has no GT relations the AP-based fields are 0.
OiEvaluation OiEvaluateDetailed(const DatasetSplit& predictions,
                                const DatasetSplit& ground_truth,
                                const EvalConfig& config);

OiReport OiEvaluate(const DatasetSplit& predictions,
                    const DatasetSplit& ground_truth,
                    const EvalConfig& config);

}  // namespace sgg

#endif  // SGG_OI_METRICS_H_
