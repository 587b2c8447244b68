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
#ifndef SGG_FREQ_BASELINE_H_
#define SGG_FREQ_BASELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgg/core.h"
#include "sgg/relation_source.h"

namespace sgg {

// kFreqOverlap only counts, and only predicts for, pairs whose boxes have a
// strictly positive intersection.
enum class PriorVariant { kFreq, kFreqOverlap };
// Relation score: P(p | s, o), or count / (largest count in the prior).
enum class PriorScoreMode { kProbability, kRawCount };

std::string_view PriorVariantName(PriorVariant variant);
PriorVariant ParsePriorVariant(std::string_view name);  // "freq", "freq-overlap"

// Predicate counts per (subject label, object label).
class FrequencyPrior {
 public:
  using LabelPair = std::pair<int, int>;
  using Counts = std::map<LabelPair, std::map<int, std::int64_t>>;

  explicit FrequencyPrior(PriorVariant variant = PriorVariant::kFreq)
      : variant_(variant) {}

  PriorVariant variant() const { return variant_; }
  const Counts& counts() const { return counts_; }
  bool empty() const { return counts_.empty(); }

  // Throws ContractError on a non-positive count.
  void Add(int subject_label, int object_label, int predicate,
           std::int64_t count = 1);
  void Merge(const FrequencyPrior& other);

  std::int64_t Count(int subject_label, int object_label, int predicate) const;
  std::int64_t Total(int subject_label, int object_label) const;
  double Probability(int subject_label, int object_label, int predicate) const;
  std::int64_t MaxCount() const { return max_count_; }

  // Observed predicates for the label pair, best first; ties go to the lower
  // predicate index. Empty for unseen pairs.
  std::vector<ScoredPredicate> Distribution(
      int subject_label, int object_label,
      PriorScoreMode mode = PriorScoreMode::kProbability) const;

  // Predicate with the largest summed count (lowest index on ties); 0 when
  // the prior is empty.
  int MostFrequentPredicate() const;

  friend bool operator==(const FrequencyPrior&,
                         const FrequencyPrior&) = default;

 private:
  PriorVariant variant_;
  Counts counts_;
  std::int64_t max_count_ = 0;
};

// Counts every GT relation of `train` (skipping non-overlapping pairs for
// kFreqOverlap). Images are counted in parallel and merged.
FrequencyPrior BuildPrior(const DatasetSplit& train, PriorVariant variant,
                          int threads = 1);

// For every ordered pair (i, j), i != j, of `detections` (overlapping pairs
// only under kFreqOverlap), emits the top EffectiveMaxPredicates()
// predicates of the prior. Unseen label pairs emit nothing. Existing
// relations of `detections` are discarded.
SceneGraph PredictWithPrior(const SceneGraph& detections,
                            const FrequencyPrior& prior,
                            const EvalConfig& config,
                            PriorScoreMode mode = PriorScoreMode::kProbability);

DatasetSplit PredictSplitWithPrior(
    const DatasetSplit& detections, const FrequencyPrior& prior,
    const EvalConfig& config,
    PriorScoreMode mode = PriorScoreMode::kProbability);

// TSV lines `subject<TAB>object<TAB>predicate<TAB>count`, sorted by label
// indices. Parsing throws ParseError / VocabularyError / DuplicateError.
std::string FormatPrior(const FrequencyPrior& prior,
                        const Vocabulary& vocabulary);
FrequencyPrior ParsePrior(std::string_view text, const Vocabulary& vocabulary,
                          PriorVariant variant);
void WritePrior(const std::filesystem::path& path, const FrequencyPrior& prior,
                const Vocabulary& vocabulary);
FrequencyPrior ReadPrior(const std::filesystem::path& path,
                         const Vocabulary& vocabulary, PriorVariant variant);

class FreqRelationSource : public RelationSource {
 public:
  explicit FreqRelationSource(
      FrequencyPrior prior,
      PriorScoreMode mode = PriorScoreMode::kProbability)
      : prior_(std::move(prior)), mode_(mode) {}

  SceneGraph Predict(const SceneGraph& objects_only,
                     const EvalConfig& config) const override;
  std::vector<ScoredPredicate> PairDistribution(
      const SceneGraph& graph, int subject_idx, int object_idx) const override;
  int FallbackPredicate() const override;

  const FrequencyPrior& prior() const { return prior_; }

 private:
  FrequencyPrior prior_;
  PriorScoreMode mode_;
};

}  // namespace sgg

#endif  // SGG_FREQ_BASELINE_H_
