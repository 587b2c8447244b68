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
#ifndef SGG_SYNTH_H_
#define SGG_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgg/core.h"
#include "sgg/relation_source.h"

namespace sgg {

// Counter-based generator: the stream for (seed, image, stage) does not
// depend on how many other images or stages were drawn before it, so
// per-image work can run in any order on any number of threads.
class KeyedRng {
 public:
  enum class Stage : std::uint64_t {
    kLayout = 1,
    kLabels,
    kRelations,
    kDrop,
    kJitter,
    kFlip,
    kPairDrop,
    kPredicateFlip,
  };

  KeyedRng(std::uint64_t seed, std::uint64_t image, Stage stage);

  std::uint64_t Next();
  double Uniform();                      // [0, 1)
  double Uniform(double lo, double hi);  // [lo, hi)
  int UniformInt(int lo, int hi);        // [lo, hi]
  bool Bernoulli(double p);

 private:
  std::uint64_t state_;
};

struct DetectionNoise {
  double drop_rate = 0.0;
  // Each coordinate moves by at most box_jitter * (box width or height).
  double box_jitter = 0.0;
  double label_flip_rate = 0.0;
};

struct RelationNoise {
  double pair_drop_rate = 0.0;
  double predicate_flip_rate = 0.0;
};

struct SynthConfig {
  std::uint64_t seed = 0;
  int num_images = 100;
  int min_objects = 3;
  int max_objects = 8;
  int min_relations = 1;
  int max_relations = 10;
  int num_object_labels = 20;
  int num_predicates = 8;
  double canvas_width = 800.0;
  double canvas_height = 600.0;
  // Probability that a GT predicate follows the label pair's preferred
  // predicate, which is what makes a frequency prior informative.
  double label_consistency = 0.8;
  // Upper bound on IoU between two GT objects of one image.
  double max_gt_iou = 0.3;
  DetectionNoise detection_noise;
  RelationNoise relation_noise;

  // Throws ConfigError (e.g. zero objects per image, rates outside [0,1]).
  void Validate() const;
};

// JSON object with optional keys: seed, num_images, objects_per_image [lo,hi],
// relations_per_image [lo,hi], num_object_labels, num_predicates,
// canvas [w,h], label_consistency, max_gt_iou,
// detection_noise {drop_rate, box_jitter, label_flip_rate},
// relation_noise {pair_drop_rate, predicate_flip_rate}.
SynthConfig ParseSynthConfig(std::string_view json_text);
std::string SynthConfigToJson(const SynthConfig& config);

struct Corruption {
  std::string image_id;
  std::string stage;  // drop, jitter, flip, pair_drop, predicate_flip
  int index = 0;      // GT object or GT relation index
  std::string detail;

  friend bool operator==(const Corruption&, const Corruption&) = default;
};

// Relation predictor that knows the ground truth. Objects are mapped to GT
// objects by best IoU (>= 0.5); every GT relation whose endpoints are both
// covered is emitted on the covering pair, unless its seeded pair-drop fires.
// A seeded predicate flip replaces the predicate and lowers the score.
class SynthRelationModel : public RelationSource {
 public:
  SynthRelationModel(DatasetSplit ground_truth, RelationNoise noise,
                     std::uint64_t seed, int num_predicates);

  SceneGraph Predict(const SceneGraph& objects_only,
                     const EvalConfig& config) const override;
  std::vector<ScoredPredicate> PairDistribution(
      const SceneGraph& graph, int subject_idx, int object_idx) const override;
  int FallbackPredicate() const override { return 0; }

  struct Decision {
    bool dropped = false;
    bool flipped = false;
    int predicate = 0;
    double score = 1.0;
  };
  // One decision per GT relation of the image; empty for unknown ids.
  const std::vector<Decision>& Decisions(std::string_view image_id) const;

 private:
  std::vector<int> MapToGroundTruth(const SceneGraph& graph,
                                    const SceneGraph& gt) const;

  DatasetSplit ground_truth_;
  std::unordered_map<std::string, std::vector<Decision>> decisions_;
};

struct SynthDataset {
  Vocabulary vocabulary;
  DatasetSplit ground_truth;
  DatasetSplit detections;   // objects only
  DatasetSplit predictions;  // SynthRelationModel run on `detections`
  std::vector<Corruption> corruptions;
};

Vocabulary SynthVocabulary(const SynthConfig& config);

// Ground-truth scenes only.
DatasetSplit GenerateGroundTruth(const SynthConfig& config, int threads = 1);

// Applies drop -> jitter -> flip to the GT objects of every image. Object
// scores are IoU(jittered, original), halved when the label was flipped, so
// untouched objects keep 1.0. Appends the corruptions to `log` when given.
DatasetSplit DegradeDetections(const DatasetSplit& ground_truth,
                               const SynthConfig& config,
                               std::vector<Corruption>* log = nullptr,
                               int threads = 1);

SynthDataset Generate(const SynthConfig& config, int threads = 1);

// Writes vocab.txt, gt.tsv, detections.tsv, predictions.tsv and
// corruptions.tsv into `dir` (created if missing).
void WriteSynthDataset(const SynthDataset& dataset,
                       const std::filesystem::path& dir);
std::string FormatCorruptionLog(const std::vector<Corruption>& log);

}  // namespace sgg

#endif  // SGG_SYNTH_H_
