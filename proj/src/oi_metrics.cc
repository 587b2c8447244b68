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
#include "sgg/oi_metrics.h"

#include <algorithm>
#include <cmath>

#include "evaluation_internal.h"
#include "sgg/errors.h"
#include "sgg/matching.h"
#include "sgg/parallel.h"

namespace sgg {
namespace {

constexpr std::size_t kRecallK = 50;

struct ImageOutcomes {
  std::vector<double> scores;      // rank order
  std::vector<int> predicates;     // rank order
  std::vector<bool> triplet_tp;
  std::vector<bool> phrase_tp;
  std::size_t recall_matched = 0;  // triplet matches within the top 50
  OiImageCounts counts;
};

std::vector<bool> TruePositives(const MatchResult& result, std::size_t n) {
  std::vector<bool> tp(n, false);
  for (const auto& [p, g] : result.matched_pairs) tp[p] = true;
  return tp;
}

}  // namespace

MetricReport OiReport::ToReport() const {
  return {
      {"score", score},
      {"recall@50", recall_at_50},
      {"wmap_triplet", wmap_triplet},
      {"map_triplet", map_triplet},
      {"wmap_phrase", wmap_phrase},
      {"map_phrase", map_phrase},
      {"triplet_proposal_recall", triplet_proposal_recall},
      {"phrase_proposal_recall", phrase_proposal_recall},
  };
}

double OiScore(double recall_at_50, double wmap_triplet, double wmap_phrase) {
  return 0.2 * recall_at_50 + 0.4 * wmap_triplet + 0.4 * wmap_phrase;
}

double AveragePrecision(std::span<const RankedOutcome> outcomes,
                        std::size_t num_gt) {
  std::size_t positives = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (std::isnan(outcomes[i].score)) {
      throw ContractError("outcome scores must not be NaN");
    }
    if (i > 0 && outcomes[i].score > outcomes[i - 1].score) {
      throw ContractError("outcomes must be sorted by descending score");
    }
    if (outcomes[i].true_positive) ++positives;
  }
  if (positives > num_gt) {
    throw ContractError("more true positives than ground-truth instances");
  }
  if (num_gt == 0) return 0.0;

  std::vector<double> precision(outcomes.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].true_positive) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = outcomes.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  // Recall rises by 1/num_gt exactly at each true positive.
  double ap = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].true_positive) ap += precision[i];
  }
  return ap / static_cast<double>(num_gt);
}

double WeightedMap(const std::map<int, double>& ap_by_predicate,
                   const std::map<int, std::size_t>& gt_count_by_predicate) {
  double weighted = 0.0;
  std::size_t total = 0;
  for (const auto& [predicate, count] : gt_count_by_predicate) {
    if (count == 0) continue;
    auto it = ap_by_predicate.find(predicate);
    const double ap = it == ap_by_predicate.end() ? 0.0 : it->second;
    weighted += ap * static_cast<double>(count);
    total += count;
  }
  if (total == 0) {
    throw UndefinedMetricError("wmAP undefined: no ground-truth relations");
  }
  return 100.0 * weighted / static_cast<double>(total);
}

double MeanAp(const std::map<int, double>& ap_by_predicate,
              const std::map<int, std::size_t>& gt_count_by_predicate) {
  double sum = 0.0;
  std::size_t classes = 0;
  for (const auto& [predicate, count] : gt_count_by_predicate) {
    if (count == 0) continue;
    auto it = ap_by_predicate.find(predicate);
    sum += it == ap_by_predicate.end() ? 0.0 : it->second;
    ++classes;
  }
  if (classes == 0) {
    throw UndefinedMetricError("mAP undefined: no ground-truth relations");
  }
  return 100.0 * sum / static_cast<double>(classes);
}

OiEvaluation OiEvaluateDetailed(const DatasetSplit& predictions,
                                const DatasetSplit& ground_truth,
                                const EvalConfig& config) {
  config.Validate();
  const std::vector<AlignedPair> pairs = AlignSplits(predictions, ground_truth);

  std::vector<ImageOutcomes> images(pairs.size());
  ParallelFor(pairs.size(), config.threads, [&](std::size_t i) {
    const SceneGraph& pred = *pairs[i].prediction;
    const SceneGraph& gt = *pairs[i].ground_truth;
    internal::CheckTaskContract(pred, gt, config.task);
    const auto ranked = RankTriplets(ApplyMode(pred, config));
    const auto gts = ResolveTriplets(gt);
    ImageOutcomes& out = images[i];
    for (const auto& t : ranked) {
      out.scores.push_back(t.score);
      out.predicates.push_back(t.predicate);
    }
    const auto triplet = MatchTriplets(
        ranked, gts, internal::OptionsFor(config, MatchCriterion::kTriplet));
    const auto phrase = MatchTriplets(
        ranked, gts, internal::OptionsFor(config, MatchCriterion::kPhrase));
    const auto pair = MatchTriplets(
        ranked, gts, internal::OptionsFor(config, MatchCriterion::kPair));
    const auto phrase_pair = MatchTriplets(
        ranked, gts, internal::OptionsFor(config, MatchCriterion::kPhrasePair));
    out.triplet_tp = TruePositives(triplet, ranked.size());
    out.phrase_tp = TruePositives(phrase, ranked.size());
    for (const auto& [p, g] : triplet.matched_pairs) {
      if (p < kRecallK) ++out.recall_matched;
    }
    out.counts = {gt.image_id, gts.size(), triplet.matched_pairs.size(),
                  pair.matched_pairs.size(), phrase_pair.matched_pairs.size()};
  });

  OiEvaluation eval;
  // Recall@50 and proposal recalls.
  double recall_sum = 0.0;
  std::size_t recall_images = 0, total_gt = 0, total_recall_matched = 0;
  std::size_t total_pair = 0, total_phrase_pair = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const ImageOutcomes& img = images[i];
    const std::size_t n_gt = img.counts.gt_relations;
    for (const auto& rel : pairs[i].ground_truth->relations) {
      ++eval.gt_count[rel.predicate];
    }
    eval.images.push_back(img.counts);
    total_pair += img.counts.pair_matched;
    total_phrase_pair += img.counts.phrase_pair_matched;
    if (n_gt == 0) continue;
    recall_sum += static_cast<double>(img.recall_matched) / static_cast<double>(n_gt);
    ++recall_images;
    total_gt += n_gt;
    total_recall_matched += img.recall_matched;
  }
  OiReport& report = eval.report;
  if (config.recall_averaging == RecallAveraging::kMacro) {
    report.recall_at_50 =
        recall_images > 0 ? 100.0 * recall_sum / static_cast<double>(recall_images)
                          : 0.0;
  } else {
    report.recall_at_50 =
        total_gt > 0 ? 100.0 * static_cast<double>(total_recall_matched) /
                           static_cast<double>(total_gt)
                     : 0.0;
  }
  if (total_gt > 0) {
    report.triplet_proposal_recall =
        100.0 * static_cast<double>(total_pair) / static_cast<double>(total_gt);
    report.phrase_proposal_recall = 100.0 *
                                    static_cast<double>(total_phrase_pair) /
                                    static_cast<double>(total_gt);
  }

  // Per-predicate AP over the split-wide ranking. Concatenating images in
  // ascending id order and rank order, then stable-sorting by score, yields
  // the (score desc, image id asc, rank asc) key.
  for (const auto& [predicate, count] : eval.gt_count) {
    std::vector<RankedOutcome> triplet_outcomes, phrase_outcomes;
    for (const ImageOutcomes& img : images) {
      for (std::size_t r = 0; r < img.scores.size(); ++r) {
        if (img.predicates[r] != predicate) continue;
        triplet_outcomes.push_back({img.scores[r], img.triplet_tp[r]});
        phrase_outcomes.push_back({img.scores[r], img.phrase_tp[r]});
      }
    }
    auto by_score = [](const RankedOutcome& a, const RankedOutcome& b) {
      return a.score > b.score;
    };
    std::stable_sort(triplet_outcomes.begin(), triplet_outcomes.end(), by_score);
    std::stable_sort(phrase_outcomes.begin(), phrase_outcomes.end(), by_score);
    eval.ap_triplet[predicate] = AveragePrecision(triplet_outcomes, count);
    eval.ap_phrase[predicate] = AveragePrecision(phrase_outcomes, count);
  }
  if (total_gt > 0) {
    report.wmap_triplet = WeightedMap(eval.ap_triplet, eval.gt_count);
    report.map_triplet = MeanAp(eval.ap_triplet, eval.gt_count);
    report.wmap_phrase = WeightedMap(eval.ap_phrase, eval.gt_count);
    report.map_phrase = MeanAp(eval.ap_phrase, eval.gt_count);
  }
  report.score =
      OiScore(report.recall_at_50, report.wmap_triplet, report.wmap_phrase);
  return eval;
}

OiReport OiEvaluate(const DatasetSplit& predictions,
                    const DatasetSplit& ground_truth,
                    const EvalConfig& config) {
  return OiEvaluateDetailed(predictions, ground_truth, config).report;
}

}  // namespace sgg
