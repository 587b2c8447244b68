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
#include "sgg/freq_baseline.h"

#include <algorithm>
#include <charconv>

#include "sgg/errors.h"
#include "sgg/ingest.h"
#include "sgg/matching.h"
#include "sgg/parallel.h"

namespace sgg {
namespace {

bool Overlaps(const BoundingBox& a, const BoundingBox& b) {
  return Iou(a, b) > 0.0;
}

}  // namespace

std::string_view PriorVariantName(PriorVariant variant) {
  return variant == PriorVariant::kFreq ? "freq" : "freq-overlap";
}

PriorVariant ParsePriorVariant(std::string_view name) {
  if (name == "freq") return PriorVariant::kFreq;
  if (name == "freq-overlap" || name == "freq_overlap") {
    return PriorVariant::kFreqOverlap;
  }
  throw ConfigError("unknown prior variant \"" + std::string(name) + "\"");
}

void FrequencyPrior::Add(int subject_label, int object_label, int predicate,
                         std::int64_t count) {
  if (count <= 0) throw ContractError("prior counts must be positive");
  std::int64_t& slot = counts_[{subject_label, object_label}][predicate];
  slot += count;
  max_count_ = std::max(max_count_, slot);
}

void FrequencyPrior::Merge(const FrequencyPrior& other) {
  for (const auto& [pair, predicates] : other.counts_) {
    for (const auto& [predicate, count] : predicates) {
      Add(pair.first, pair.second, predicate, count);
    }
  }
}

std::int64_t FrequencyPrior::Count(int subject_label, int object_label,
                                   int predicate) const {
  auto it = counts_.find({subject_label, object_label});
  if (it == counts_.end()) return 0;
  auto jt = it->second.find(predicate);
  return jt == it->second.end() ? 0 : jt->second;
}

std::int64_t FrequencyPrior::Total(int subject_label, int object_label) const {
  auto it = counts_.find({subject_label, object_label});
  if (it == counts_.end()) return 0;
  std::int64_t total = 0;
  for (const auto& [predicate, count] : it->second) total += count;
  return total;
}

double FrequencyPrior::Probability(int subject_label, int object_label,
                                   int predicate) const {
  const std::int64_t total = Total(subject_label, object_label);
  if (total == 0) return 0.0;
  return static_cast<double>(Count(subject_label, object_label, predicate)) /
         static_cast<double>(total);
}

std::vector<ScoredPredicate> FrequencyPrior::Distribution(
    int subject_label, int object_label, PriorScoreMode mode) const {
  std::vector<ScoredPredicate> out;
  auto it = counts_.find({subject_label, object_label});
  if (it == counts_.end()) return out;
  std::int64_t total = 0;
  for (const auto& [predicate, count] : it->second) total += count;
  const double denom = static_cast<double>(
      mode == PriorScoreMode::kProbability ? total : MaxCount());
  for (const auto& [predicate, count] : it->second) {
    out.push_back({predicate, static_cast<double>(count) / denom});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredPredicate& a, const ScoredPredicate& b) {
                     return a.score > b.score;
                   });
  return out;
}

int FrequencyPrior::MostFrequentPredicate() const {
  std::map<int, std::int64_t> marginal;
  for (const auto& [pair, predicates] : counts_) {
    for (const auto& [predicate, count] : predicates) marginal[predicate] += count;
  }
  int best = 0;
  std::int64_t best_count = 0;
  for (const auto& [predicate, count] : marginal) {
    if (count > best_count) {
      best = predicate;
      best_count = count;
    }
  }
  return best;
}

FrequencyPrior BuildPrior(const DatasetSplit& train, PriorVariant variant,
                          int threads) {
  const std::size_t chunks = std::max<std::size_t>(
      1, std::min<std::size_t>(train.size(), std::max(1, threads)));
  std::vector<FrequencyPrior> partial(chunks, FrequencyPrior(variant));
  const auto& graphs = train.graphs();
  ParallelFor(chunks, threads, [&](std::size_t c) {
    for (std::size_t i = c; i < graphs.size(); i += chunks) {
      const SceneGraph& g = graphs[i];
      for (const auto& rel : g.relations) {
        const DetectedObject& s = g.objects.at(rel.subject_idx);
        const DetectedObject& o = g.objects.at(rel.object_idx);
        if (variant == PriorVariant::kFreqOverlap && !Overlaps(s.box, o.box)) {
          continue;
        }
        partial[c].Add(s.label, o.label, rel.predicate);
      }
    }
  });
  FrequencyPrior prior(variant);
  for (const auto& p : partial) prior.Merge(p);
  return prior;
}

SceneGraph PredictWithPrior(const SceneGraph& detections,
                            const FrequencyPrior& prior,
                            const EvalConfig& config, PriorScoreMode mode) {
  const int keep = config.EffectiveMaxPredicates();
  SceneGraph out;
  out.image_id = detections.image_id;
  out.objects = detections.objects;
  const int n = static_cast<int>(out.objects.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const DetectedObject& s = out.objects[i];
      const DetectedObject& o = out.objects[j];
      if (prior.variant() == PriorVariant::kFreqOverlap &&
          !Overlaps(s.box, o.box)) {
        continue;
      }
      const auto dist = prior.Distribution(s.label, o.label, mode);
      const std::size_t count = std::min<std::size_t>(dist.size(), keep);
      for (std::size_t k = 0; k < count; ++k) {
        out.relations.push_back({i, j, dist[k].predicate, dist[k].score});
      }
    }
  }
  return out;
}

DatasetSplit PredictSplitWithPrior(const DatasetSplit& detections,
                                   const FrequencyPrior& prior,
                                   const EvalConfig& config,
                                   PriorScoreMode mode) {
  std::vector<SceneGraph> graphs(detections.size());
  ParallelFor(detections.size(), config.threads, [&](std::size_t i) {
    graphs[i] = PredictWithPrior(detections.graphs()[i], prior, config, mode);
  });
  DatasetSplit out(detections.name());
  for (auto& g : graphs) out.Add(std::move(g));
  return out;
}

std::string FormatPrior(const FrequencyPrior& prior,
                        const Vocabulary& vocabulary) {
  std::string out;
  for (const auto& [pair, predicates] : prior.counts()) {
    for (const auto& [predicate, count] : predicates) {
      out += vocabulary.ObjectLabel(pair.first) + "\t" +
             vocabulary.ObjectLabel(pair.second) + "\t" +
             vocabulary.PredicateLabel(predicate) + "\t" +
             std::to_string(count) + "\n";
    }
  }
  return out;
}

FrequencyPrior ParsePrior(std::string_view text, const Vocabulary& vocabulary,
                          PriorVariant variant) {
  FrequencyPrior prior(variant);
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view()
                                         : text.substr(end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string_view::npos;
         start = tab + 1) {
      cols.push_back(line.substr(start, tab - start));
    }
    cols.push_back(line.substr(start));
    if (cols.size() != 4) throw ParseError(number, "expected 4 tab-separated columns");

    const auto s = vocabulary.FindObject(cols[0]);
    if (!s) throw VocabularyError(std::string(cols[0]), number);
    const auto o = vocabulary.FindObject(cols[1]);
    if (!o) throw VocabularyError(std::string(cols[1]), number);
    const auto p = vocabulary.FindPredicate(cols[2]);
    if (!p) throw VocabularyError(std::string(cols[2]), number);
    std::int64_t count = 0;
    const auto [ptr, ec] =
        std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), count);
    if (ec != std::errc() || ptr != cols[3].data() + cols[3].size() || count <= 0) {
      throw ParseError(number, "count must be a positive integer");
    }
    if (prior.Count(*s, *o, *p) != 0) {
      throw DuplicateError("line " + std::to_string(number) +
                           ": duplicate prior entry");
    }
    prior.Add(*s, *o, *p, count);
  }
  return prior;
}

void WritePrior(const std::filesystem::path& path, const FrequencyPrior& prior,
                const Vocabulary& vocabulary) {
  WriteFile(path, FormatPrior(prior, vocabulary));
}

FrequencyPrior ReadPrior(const std::filesystem::path& path,
                         const Vocabulary& vocabulary, PriorVariant variant) {
  return ParsePrior(ReadFile(path), vocabulary, variant);
}

SceneGraph FreqRelationSource::Predict(const SceneGraph& objects_only,
                                       const EvalConfig& config) const {
  return PredictWithPrior(objects_only, prior_, config, mode_);
}

std::vector<ScoredPredicate> FreqRelationSource::PairDistribution(
    const SceneGraph& graph, int subject_idx, int object_idx) const {
  return prior_.Distribution(graph.objects.at(subject_idx).label,
                             graph.objects.at(object_idx).label, mode_);
}

int FreqRelationSource::FallbackPredicate() const {
  return prior_.MostFrequentPredicate();
}

}  // namespace sgg
