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
#ifndef SGG_CORE_H_
#define SGG_CORE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sgg {

// Axis-aligned box in pixel coordinates. Area uses the exclusive convention
// (x2 - x1) * (y2 - y1), no "+1".
class BoundingBox {
 public:
  BoundingBox() = default;
  // Throws ContractError unless x1 <= x2 and y1 <= y2 and all are finite.
  BoundingBox(double x1, double y1, double x2, double y2);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }
  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double Area() const { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x1_ = 0.0;
  double y1_ = 0.0;
  double x2_ = 0.0;
  double y2_ = 0.0;
};

// Object and predicate label lists. Index = position in the list.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws DuplicateError on a repeated label within either list.
  Vocabulary(std::vector<std::string> object_labels,
             std::vector<std::string> predicate_labels);

  const std::vector<std::string>& object_labels() const {
    return object_labels_;
  }
  const std::vector<std::string>& predicate_labels() const {
    return predicate_labels_;
  }
  int num_objects() const { return static_cast<int>(object_labels_.size()); }
  int num_predicates() const {
    return static_cast<int>(predicate_labels_.size());
  }

  std::optional<int> FindObject(std::string_view label) const;
  std::optional<int> FindPredicate(std::string_view label) const;
  // Throw IndexError on out-of-range indices.
  const std::string& ObjectLabel(int index) const;
  const std::string& PredicateLabel(int index) const;

 private:
  std::vector<std::string> object_labels_;
  std::vector<std::string> predicate_labels_;
  std::unordered_map<std::string, int> object_index_;
  std::unordered_map<std::string, int> predicate_index_;
};

struct DetectedObject {
  BoundingBox box;
  int label = 0;
  double score = 1.0;

  friend bool operator==(const DetectedObject&,
                         const DetectedObject&) = default;
};

struct RelationPrediction {
  int subject_idx = 0;
  int object_idx = 0;
  int predicate = 0;
  double score = 1.0;

  friend bool operator==(const RelationPrediction&,
                         const RelationPrediction&) = default;
};

struct SceneGraph {
  std::string image_id;
  std::vector<DetectedObject> objects;
  std::vector<RelationPrediction> relations;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

// Checks index ranges, subject != object, score ranges, and label ranges when
// a vocabulary is given. Throws ContractError / IndexError.
void ValidateSceneGraph(const SceneGraph& graph,
                        const Vocabulary* vocabulary = nullptr);

// True when every object and relation carries score 1.0.
bool IsGroundTruth(const SceneGraph& graph);

// Object boxes and labels equal element-wise (scores ignored).
bool SameObjects(std::span<const DetectedObject> a,
                 std::span<const DetectedObject> b);

enum class Task { kPredCls, kSgCls, kSgDet };
enum class Mode { kConstrained, kUnconstrained };
enum class RecallAveraging { kMacro, kMicro };

std::string_view TaskName(Task task);
Task ParseTask(std::string_view name);  // throws ConfigError
std::string_view ModeName(Mode mode);
Mode ParseMode(std::string_view name);  // throws ConfigError

struct EvalConfig {
  Task task = Task::kSgDet;
  Mode mode = Mode::kConstrained;
  int max_predicates_per_pair = 1;
  std::vector<int> k_values = {20, 50, 100};
  double iou_threshold = 0.5;
  RecallAveraging recall_averaging = RecallAveraging::kMacro;
  // Worker count for per-image stages. Never changes any computed value.
  int threads = 1;

  // 1 in constrained mode, max_predicates_per_pair otherwise.
  int EffectiveMaxPredicates() const;
  // Throws ConfigError on non-positive K / max, or a threshold outside [0,1].
  void Validate() const;

  // Visual Genome defaults: constrained, K = 20/50/100.
  static EvalConfig VisualGenome(Task task = Task::kSgDet);
  // Open Images defaults: sgdet, unconstrained with at most 2 predicates.
  static EvalConfig OpenImages();
};

// Ranking score of a relation: subject.score * rel.score * object.score.
// Throws IndexError on an invalid subject/object index.
double TripletScore(const RelationPrediction& rel,
                    std::span<const DetectedObject> objects);

// Keeps, for every ordered (subject, object) pair, the top
// EffectiveMaxPredicates() relations by score; ties go to the lower predicate
// index. Survivors keep their relative order.
SceneGraph ApplyMode(const SceneGraph& graph, const EvalConfig& config);

// Ordered list of image graphs with unique ids.
class DatasetSplit {
 public:
  DatasetSplit() = default;
  explicit DatasetSplit(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  // Throws DuplicateError if the image id is already present.
  void Add(SceneGraph graph);
  const SceneGraph* Find(std::string_view image_id) const;
  SceneGraph* FindMutable(std::string_view image_id);

  const std::vector<SceneGraph>& graphs() const { return graphs_; }
  std::size_t size() const { return graphs_.size(); }
  bool empty() const { return graphs_.empty(); }

  auto begin() const { return graphs_.begin(); }
  auto end() const { return graphs_.end(); }

  friend bool operator==(const DatasetSplit& a, const DatasetSplit& b) {
    return a.name_ == b.name_ && a.graphs_ == b.graphs_;
  }

 private:
  std::string name_;
  std::vector<SceneGraph> graphs_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct AlignedPair {
  const SceneGraph* prediction;
  const SceneGraph* ground_truth;
};

// Pairs graphs by image id, ordered by ascending image id. Throws
// AlignmentError when the id sets differ.
std::vector<AlignedPair> AlignSplits(const DatasetSplit& predictions,
                                     const DatasetSplit& ground_truth);

}  // namespace sgg

#endif  // SGG_CORE_H_
