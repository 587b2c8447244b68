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
#include "sgg/compare.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "sgg/errors.h"
#include "sgg/matching.h"
#include "sgg/parallel.h"

namespace sgg {
namespace {

using TripletKey = std::array<std::int64_t, 11>;

std::int64_t Canonical(double coordinate) {
  return std::llround(coordinate * 100.0);
}

TripletKey KeyOf(const ResolvedTriplet& t) {
  return {Canonical(t.subject_box.x1()), Canonical(t.subject_box.y1()),
          Canonical(t.subject_box.x2()), Canonical(t.subject_box.y2()),
          t.subject_label,              t.predicate,
          Canonical(t.object_box.x1()),  Canonical(t.object_box.y1()),
          Canonical(t.object_box.x2()),  Canonical(t.object_box.y2()),
          t.object_label};
}

EvalConfig ForcedTop1() {
  EvalConfig config;
  config.mode = Mode::kConstrained;
  return config;
}

// Unique triplets of the constrained graph, ranked.
std::vector<ResolvedTriplet> UniqueTriplets(const SceneGraph& graph) {
  std::set<TripletKey> seen;
  std::vector<ResolvedTriplet> out;
  for (const auto& t : RankTriplets(ApplyMode(graph, ForcedTop1()))) {
    if (seen.insert(KeyOf(t)).second) out.push_back(t);
  }
  return out;
}

std::map<std::pair<int, int>, int> TopPredicates(const SceneGraph& graph) {
  std::map<std::pair<int, int>, int> top;
  for (const auto& rel : ApplyMode(graph, ForcedTop1()).relations) {
    top[{rel.subject_idx, rel.object_idx}] = rel.predicate;
  }
  return top;
}

std::string Fixed4(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

}  // namespace

ComparisonKind ParseComparisonKind(std::string_view name) {
  if (name == "similarity") return ComparisonKind::kSimilarity;
  if (name == "ensemble") return ComparisonKind::kEnsembleAccuracy;
  throw ConfigError("unknown comparison kind \"" + std::string(name) + "\"");
}

std::string ComparisonMatrix::ToTsv() const {
  std::string out = "model";
  for (const auto& name : names) out += "\t" + name;
  out += "\n";
  for (std::size_t i = 0; i < size(); ++i) {
    out += names[i];
    for (std::size_t j = 0; j < size(); ++j) out += "\t" + Fixed4(at(i, j));
    out += "\n";
  }
  return out;
}

double PairwiseSimilarity(const DatasetSplit& a, const DatasetSplit& b,
                          InstanceIdentity identity, int threads) {
  const std::vector<AlignedPair> pairs = AlignSplits(a, b);
  // Per image: |A|, |B|, |A n B|.
  std::vector<std::array<std::size_t, 3>> counts(pairs.size());
  ParallelFor(pairs.size(), threads, [&](std::size_t i) {
    const auto ta = UniqueTriplets(*pairs[i].prediction);
    const auto tb = UniqueTriplets(*pairs[i].ground_truth);
    std::size_t common = 0;
    if (identity == InstanceIdentity::kExactBox) {
      std::set<TripletKey> keys;
      for (const auto& t : ta) keys.insert(KeyOf(t));
      for (const auto& t : tb) common += keys.count(KeyOf(t));
    } else {
      MatchOptions options;
      options.criterion = MatchCriterion::kTriplet;
      options.iou_threshold = 0.5;
      common = MatchTriplets(ta, tb, options).matched_pairs.size();
    }
    counts[i] = {ta.size(), tb.size(), common};
  });
  std::size_t inter = 0, uni = 0;
  for (const auto& [na, nb, common] : counts) {
    inter += common;
    uni += na + nb - common;
  }
  if (uni == 0) return 100.0;
  return 100.0 * static_cast<double>(inter) / static_cast<double>(uni);
}

double EnsembleAccuracy(const DatasetSplit& a, const DatasetSplit& b,
                        const DatasetSplit& ground_truth, int threads) {
  const std::vector<AlignedPair> pa = AlignSplits(a, ground_truth);
  const std::vector<AlignedPair> pb = AlignSplits(b, ground_truth);
  std::vector<std::pair<std::size_t, std::size_t>> counts(pa.size());
  ParallelFor(pa.size(), threads, [&](std::size_t i) {
    const SceneGraph& gt = *pa[i].ground_truth;
    for (const SceneGraph* model : {pa[i].prediction, pb[i].prediction}) {
      if (!SameObjects(model->objects, gt.objects)) {
        throw TaskContractError("image \"" + gt.image_id +
                                "\": ensemble accuracy needs predcls inputs "
                                "carrying the ground-truth objects");
      }
    }
    const auto top_a = TopPredicates(*pa[i].prediction);
    const auto top_b = TopPredicates(*pb[i].prediction);
    std::size_t covered = 0;
    for (const auto& rel : gt.relations) {
      const std::pair<int, int> key{rel.subject_idx, rel.object_idx};
      auto ia = top_a.find(key);
      auto ib = top_b.find(key);
      if ((ia != top_a.end() && ia->second == rel.predicate) ||
          (ib != top_b.end() && ib->second == rel.predicate)) {
        ++covered;
      }
    }
    counts[i] = {covered, gt.relations.size()};
  });
  std::size_t covered = 0, total = 0;
  for (const auto& [c, t] : counts) {
    covered += c;
    total += t;
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(covered) / static_cast<double>(total);
}

ComparisonMatrix SimilarityMatrix(std::vector<std::string> names,
                                  std::span<const DatasetSplit> models,
                                  InstanceIdentity identity, int threads) {
  if (names.size() != models.size()) {
    throw ConfigError("one name per model required");
  }
  ComparisonMatrix m{ComparisonKind::kSimilarity, std::move(names), {}};
  const std::size_t n = models.size();
  m.values.assign(n * n, 100.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double v = PairwiseSimilarity(models[i], models[j], identity, threads);
      m.values[i * n + j] = v;
      m.values[j * n + i] = v;
    }
  }
  return m;
}

ComparisonMatrix EnsembleMatrix(std::vector<std::string> names,
                                std::span<const DatasetSplit> models,
                                const DatasetSplit& ground_truth, int threads) {
  if (names.size() != models.size()) {
    throw ConfigError("one name per model required");
  }
  ComparisonMatrix m{ComparisonKind::kEnsembleAccuracy, std::move(names), {}};
  const std::size_t n = models.size();
  m.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = EnsembleAccuracy(models[i], models[j], ground_truth, threads);
      m.values[i * n + j] = v;
      m.values[j * n + i] = v;
    }
  }
  return m;
}

}  // namespace sgg
