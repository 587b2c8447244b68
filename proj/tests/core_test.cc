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
#include "sgg/core.h"

#include <gtest/gtest.h>

#include "sgg/errors.h"
#include "test_util.h"

namespace sgg {
namespace {

using testing::Box;
using testing::Graph;
using testing::Obj;
using testing::Rel;

TEST(BoundingBoxTest, AreaUsesExclusiveConvention) {
  EXPECT_DOUBLE_EQ(Box(0, 0, 10, 5).Area(), 50.0);
  EXPECT_DOUBLE_EQ(Box(3, 3, 3, 7).Area(), 0.0);
}

TEST(BoundingBoxTest, RejectsInvertedOrNonFiniteCoordinates) {
  EXPECT_THROW(Box(5, 0, 4, 1), ContractError);
  EXPECT_THROW(Box(0, 5, 1, 4), ContractError);
  EXPECT_THROW(Box(0, 0, std::numeric_limits<double>::infinity(), 1),
               ContractError);
  EXPECT_THROW(Box(std::nan(""), 0, 1, 1), ContractError);
}

TEST(VocabularyTest, LookupIsBijective) {
  Vocabulary v({"man", "horse"}, {"rides"});
  EXPECT_EQ(v.num_objects(), 2);
  EXPECT_EQ(v.num_predicates(), 1);
  EXPECT_EQ(v.FindObject("horse"), 1);
  EXPECT_EQ(v.ObjectLabel(*v.FindObject("man")), "man");
  EXPECT_EQ(v.FindPredicate("rides"), 0);
  EXPECT_FALSE(v.FindObject("unicorn").has_value());
  EXPECT_THROW(v.ObjectLabel(2), IndexError);
  EXPECT_THROW(v.PredicateLabel(-1), IndexError);
}

TEST(VocabularyTest, DuplicateLabelsRejected) {
  EXPECT_THROW(Vocabulary({"man", "man"}, {}), DuplicateError);
  EXPECT_THROW(Vocabulary({"man"}, {"on", "on"}), DuplicateError);
  // The same string may appear once in each list.
  EXPECT_NO_THROW(Vocabulary({"on"}, {"on"}));
}

TEST(TripletScoreTest, ProductOfFactors) {
  std::vector<DetectedObject> objs = {Obj(Box(0, 0, 1, 1), 0, 1.0),
                                      Obj(Box(0, 0, 1, 1), 0, 1.0)};
  EXPECT_DOUBLE_EQ(TripletScore(Rel(0, 1, 0, 1.0), objs), 1.0);
  objs[0].score = 0.5;
  objs[1].score = 0.5;
  EXPECT_DOUBLE_EQ(TripletScore(Rel(0, 1, 0, 1.0), objs), 0.25);
  objs[0].score = 0.9;
  EXPECT_NEAR(TripletScore(Rel(0, 1, 0, 0.8), objs), 0.36, 1e-15);
}

TEST(TripletScoreTest, InvalidIndexThrows) {
  std::vector<DetectedObject> objs = {Obj(Box(0, 0, 1, 1), 0)};
  EXPECT_THROW(TripletScore(Rel(0, 1, 0), objs), IndexError);
  EXPECT_THROW(TripletScore(Rel(-1, 0, 0), objs), IndexError);
}

TEST(TripletScoreTest, MonotoneInEachFactor) {
  std::vector<DetectedObject> objs = {Obj(Box(0, 0, 1, 1), 0, 0.3),
                                      Obj(Box(0, 0, 1, 1), 0, 0.6)};
  const double base = TripletScore(Rel(0, 1, 0, 0.5), objs);
  EXPECT_GE(TripletScore(Rel(0, 1, 0, 0.7), objs), base);
  objs[0].score = 0.4;
  EXPECT_GE(TripletScore(Rel(0, 1, 0, 0.5), objs), base);
  objs[1].score = 0.9;
  EXPECT_GE(TripletScore(Rel(0, 1, 0, 0.5), objs), base);
}

SceneGraph ThreePredicatePair() {
  return Graph("img", {Obj(Box(0, 0, 1, 1), 0), Obj(Box(1, 1, 2, 2), 1)},
               {Rel(0, 1, 2, 0.1), Rel(0, 1, 0, 0.9), Rel(0, 1, 1, 0.5)});
}

TEST(ApplyModeTest, ConstrainedKeepsTopOne) {
  EvalConfig config;
  config.mode = Mode::kConstrained;
  const SceneGraph out = ApplyMode(ThreePredicatePair(), config);
  ASSERT_EQ(out.relations.size(), 1u);
  EXPECT_DOUBLE_EQ(out.relations[0].score, 0.9);
}

TEST(ApplyModeTest, UnconstrainedKeepsTopTwoInOriginalOrder) {
  EvalConfig config;
  config.mode = Mode::kUnconstrained;
  config.max_predicates_per_pair = 2;
  const SceneGraph out = ApplyMode(ThreePredicatePair(), config);
  ASSERT_EQ(out.relations.size(), 2u);
  EXPECT_DOUBLE_EQ(out.relations[0].score, 0.9);
  EXPECT_DOUBLE_EQ(out.relations[1].score, 0.5);
}

TEST(ApplyModeTest, OneRelationPerPairUnchanged) {
  const SceneGraph g =
      Graph("img", {Obj(Box(0, 0, 1, 1), 0), Obj(Box(1, 1, 2, 2), 1)},
            {Rel(0, 1, 2, 0.3), Rel(1, 0, 0, 0.9)});
  EXPECT_EQ(ApplyMode(g, EvalConfig{}), g);
}

TEST(ApplyModeTest, TiesGoToLowerPredicate) {
  const SceneGraph g =
      Graph("img", {Obj(Box(0, 0, 1, 1), 0), Obj(Box(1, 1, 2, 2), 1)},
            {Rel(0, 1, 3, 0.5), Rel(0, 1, 1, 0.5), Rel(0, 1, 2, 0.5)});
  const SceneGraph out = ApplyMode(g, EvalConfig{});
  ASSERT_EQ(out.relations.size(), 1u);
  EXPECT_EQ(out.relations[0].predicate, 1);
}

TEST(ApplyModeTest, MaxIgnoredInConstrainedMode) {
  EvalConfig config;
  config.max_predicates_per_pair = 3;
  EXPECT_EQ(config.EffectiveMaxPredicates(), 1);
  config.mode = Mode::kUnconstrained;
  EXPECT_EQ(config.EffectiveMaxPredicates(), 3);
}

TEST(EvalConfigTest, ValidateRejectsBadFields) {
  EvalConfig config;
  config.k_values = {0};
  EXPECT_THROW(config.Validate(), ConfigError);
  config = EvalConfig{};
  config.iou_threshold = 1.5;
  EXPECT_THROW(config.Validate(), ConfigError);
  config = EvalConfig{};
  config.max_predicates_per_pair = 0;
  EXPECT_THROW(config.Validate(), ConfigError);
  EXPECT_NO_THROW(EvalConfig::OpenImages().Validate());
}

TEST(EvalConfigTest, Presets) {
  const EvalConfig oi = EvalConfig::OpenImages();
  EXPECT_EQ(oi.task, Task::kSgDet);
  EXPECT_EQ(oi.mode, Mode::kUnconstrained);
  EXPECT_EQ(oi.EffectiveMaxPredicates(), 2);
  const EvalConfig vg = EvalConfig::VisualGenome(Task::kSgCls);
  EXPECT_EQ(vg.task, Task::kSgCls);
  EXPECT_EQ(vg.mode, Mode::kConstrained);
  EXPECT_EQ(vg.k_values, (std::vector<int>{20, 50, 100}));
}

TEST(TaskModeNames, RoundTrip) {
  for (Task t : {Task::kPredCls, Task::kSgCls, Task::kSgDet}) {
    EXPECT_EQ(ParseTask(TaskName(t)), t);
  }
  for (Mode m : {Mode::kConstrained, Mode::kUnconstrained}) {
    EXPECT_EQ(ParseMode(ModeName(m)), m);
  }
  EXPECT_THROW(ParseTask("detect"), ConfigError);
  EXPECT_THROW(ParseMode("loose"), ConfigError);
}

TEST(ValidateSceneGraphTest, ChecksIndicesAndScores) {
  const Vocabulary vocab = testing::SmallVocabulary();
  SceneGraph g = Graph("img", {Obj(Box(0, 0, 1, 1), 0), Obj(Box(0, 0, 2, 2), 1)},
                       {Rel(0, 1, 0)});
  EXPECT_NO_THROW(ValidateSceneGraph(g, &vocab));
  EXPECT_TRUE(IsGroundTruth(g));

  SceneGraph self_loop = g;
  self_loop.relations[0].object_idx = 0;
  EXPECT_THROW(ValidateSceneGraph(self_loop), ContractError);

  SceneGraph dangling = g;
  dangling.relations[0].object_idx = 5;
  EXPECT_THROW(ValidateSceneGraph(dangling), Error);

  SceneGraph bad_score = g;
  bad_score.objects[0].score = 1.5;
  EXPECT_THROW(ValidateSceneGraph(bad_score), ContractError);

  SceneGraph bad_label = g;
  bad_label.objects[0].label = 99;
  EXPECT_THROW(ValidateSceneGraph(bad_label, &vocab), Error);
  EXPECT_NO_THROW(ValidateSceneGraph(bad_label));

  SceneGraph pred = g;
  pred.relations[0].score = 0.4;
  EXPECT_FALSE(IsGroundTruth(pred));
}

TEST(SameObjectsTest, IgnoresScores) {
  std::vector<DetectedObject> a = {Obj(Box(0, 0, 1, 1), 0, 1.0)};
  std::vector<DetectedObject> b = {Obj(Box(0, 0, 1, 1), 0, 0.2)};
  EXPECT_TRUE(SameObjects(a, b));
  b[0].label = 1;
  EXPECT_FALSE(SameObjects(a, b));
  b.push_back(a[0]);
  EXPECT_FALSE(SameObjects(a, b));
}

TEST(DatasetSplitTest, AddFindAndDuplicate) {
  DatasetSplit split("val");
  split.Add(Graph("b", {}));
  split.Add(Graph("a", {}));
  EXPECT_EQ(split.size(), 2u);
  EXPECT_EQ(split.graphs()[0].image_id, "b");
  ASSERT_NE(split.Find("a"), nullptr);
  EXPECT_EQ(split.Find("zzz"), nullptr);
  EXPECT_THROW(split.Add(Graph("a", {})), DuplicateError);
}

TEST(AlignSplitsTest, SortsByImageIdAndChecksSets) {
  const DatasetSplit gt = testing::Split({Graph("b", {}), Graph("a", {})});
  const DatasetSplit pred = testing::Split({Graph("a", {}), Graph("b", {})});
  const auto pairs = AlignSplits(pred, gt);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].ground_truth->image_id, "a");
  EXPECT_EQ(pairs[0].prediction->image_id, "a");
  const DatasetSplit other = testing::Split({Graph("a", {}), Graph("c", {})});
  EXPECT_THROW(AlignSplits(other, gt), AlignmentError);
  const DatasetSplit fewer = testing::Split({Graph("a", {})});
  EXPECT_THROW(AlignSplits(fewer, gt), AlignmentError);
}

}  // namespace
}  // namespace sgg
