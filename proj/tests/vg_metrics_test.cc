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
#include "sgg/vg_metrics.h"

#include <gtest/gtest.h>

#include "sgg/errors.h"
#include "test_util.h"

namespace sgg {
namespace {

using testing::Box;
using testing::Graph;
using testing::Obj;
using testing::Rel;

// man(0) rides(0) horse(1); man wears(2) hat(2).
SceneGraph RiderScene(std::string id = "img") {
  return Graph(std::move(id),
               {Obj(Box(0, 0, 10, 10), 0), Obj(Box(5, 5, 20, 20), 1),
                Obj(Box(0, 0, 4, 4), 2)},
               {Rel(0, 1, 0), Rel(0, 2, 2)});
}

TEST(VgRecallTest, PerfectPredictionsGiveHundred) {
  const DatasetSplit gt = testing::Split({RiderScene("a"), RiderScene("b")});
  for (Task task : {Task::kPredCls, Task::kSgCls, Task::kSgDet}) {
    const VgRecallReport r = VgRecall(gt, gt, EvalConfig::VisualGenome(task));
    for (int k : {20, 50, 100}) EXPECT_DOUBLE_EQ(r.recall_at.at(k), 100.0);
  }
}

TEST(VgRecallTest, EmptyPredictionsGiveZero) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph empty = RiderScene();
  empty.relations.clear();
  const DatasetSplit pred = testing::Split({empty});
  for (Task task : {Task::kPredCls, Task::kSgCls, Task::kSgDet}) {
    const VgRecallReport r = VgRecall(pred, gt, EvalConfig::VisualGenome(task));
    for (const auto& [k, v] : r.recall_at) EXPECT_DOUBLE_EQ(v, 0.0);
  }
}

TEST(VgRecallTest, OneOfTwoCorrectGivesFifty) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph pred = RiderScene();
  pred.relations = {Rel(0, 1, 0, 0.9), Rel(0, 2, 3, 0.8)};
  const VgRecallReport r = VgRecall(testing::Split({pred}), gt,
                                    EvalConfig::VisualGenome(Task::kSgDet));
  EXPECT_DOUBLE_EQ(r.recall_at.at(20), 50.0);
  EXPECT_EQ(r.ToReport().at("sgdet@50"), 50.0);
}

TEST(VgRecallTest, TruncationToTopK) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph pred = RiderScene();
  // The correct relations rank second and third.
  pred.relations = {Rel(1, 0, 1, 0.9), Rel(0, 1, 0, 0.8), Rel(0, 2, 2, 0.7)};
  EvalConfig config = EvalConfig::VisualGenome(Task::kSgDet);
  config.k_values = {1, 2, 3};
  const VgRecallReport r = VgRecall(testing::Split({pred}), gt, config);
  EXPECT_DOUBLE_EQ(r.recall_at.at(1), 0.0);
  EXPECT_DOUBLE_EQ(r.recall_at.at(2), 50.0);
  EXPECT_DOUBLE_EQ(r.recall_at.at(3), 100.0);
}

TEST(VgRecallTest, ConstrainedModeDropsSecondPredicate) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph pred = RiderScene();
  pred.relations = {Rel(0, 1, 1, 0.9), Rel(0, 1, 0, 0.8), Rel(0, 2, 2, 0.7)};
  EvalConfig config = EvalConfig::VisualGenome(Task::kSgDet);
  EXPECT_DOUBLE_EQ(
      VgRecall(testing::Split({pred}), gt, config).recall_at.at(20), 50.0);
  config.mode = Mode::kUnconstrained;
  config.max_predicates_per_pair = 2;
  EXPECT_DOUBLE_EQ(
      VgRecall(testing::Split({pred}), gt, config).recall_at.at(20), 100.0);
}

TEST(VgRecallTest, ImagesWithoutGtRelationsExcluded) {
  SceneGraph no_rel = RiderScene("z");
  no_rel.relations.clear();
  const DatasetSplit gt = testing::Split({RiderScene("a"), no_rel});
  SceneGraph pred_a = RiderScene("a");
  pred_a.relations = {Rel(0, 1, 0, 0.9)};
  const DatasetSplit pred = testing::Split({pred_a, no_rel});
  EXPECT_DOUBLE_EQ(
      VgRecall(pred, gt, EvalConfig::VisualGenome()).recall_at.at(50), 50.0);
  const DatasetSplit only_empty = testing::Split({no_rel});
  EXPECT_DOUBLE_EQ(VgRecall(only_empty, only_empty, EvalConfig::VisualGenome())
                       .recall_at.at(50),
                   0.0);
}

TEST(VgRecallTest, MicroPoolsRelations) {
  SceneGraph one = Graph("b", {Obj(Box(0, 0, 10, 10), 0), Obj(Box(5, 5, 20, 20), 1)},
                         {Rel(0, 1, 0)});
  const DatasetSplit gt = testing::Split({RiderScene("a"), one});
  SceneGraph pred_a = RiderScene("a");
  pred_a.relations = {Rel(0, 1, 0, 0.9)};
  const DatasetSplit pred = testing::Split({pred_a, one});
  EvalConfig config = EvalConfig::VisualGenome();
  // Macro: (1/2 + 1/1) / 2. Micro: 2 / 3.
  EXPECT_DOUBLE_EQ(VgRecall(pred, gt, config).recall_at.at(50), 75.0);
  config.recall_averaging = RecallAveraging::kMicro;
  EXPECT_NEAR(VgRecall(pred, gt, config).recall_at.at(50), 200.0 / 3.0, 1e-12);
}

TEST(VgRecallTest, SgdetUsesIouSgclsUsesIndex) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph shifted = RiderScene();
  shifted.objects[1].box = Box(6, 6, 21, 21);  // IoU with GT horse > 0.5
  const VgRecallReport sgdet =
      VgRecall(testing::Split({shifted}), gt, EvalConfig::VisualGenome());
  EXPECT_DOUBLE_EQ(sgdet.recall_at.at(20), 100.0);
  EXPECT_THROW(VgRecall(testing::Split({shifted}), gt,
                        EvalConfig::VisualGenome(Task::kSgCls)),
               TaskContractError);
}

TEST(VgRecallTest, TaskContract) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph relabeled = RiderScene();
  relabeled.objects[2].label = 3;
  // sgcls allows predicted labels on GT boxes; predcls does not.
  EXPECT_NO_THROW(VgRecall(testing::Split({relabeled}), gt,
                           EvalConfig::VisualGenome(Task::kSgCls)));
  EXPECT_THROW(VgRecall(testing::Split({relabeled}), gt,
                        EvalConfig::VisualGenome(Task::kPredCls)),
               TaskContractError);
  EXPECT_DOUBLE_EQ(VgRecall(testing::Split({relabeled}), gt,
                            EvalConfig::VisualGenome(Task::kSgCls))
                       .recall_at.at(20),
                   50.0);
}

TEST(VgRecallTest, AlignmentErrors) {
  const DatasetSplit gt = testing::Split({RiderScene("a")});
  const DatasetSplit pred = testing::Split({RiderScene("b")});
  EXPECT_THROW(VgRecall(pred, gt, EvalConfig::VisualGenome()), AlignmentError);
}

TEST(VgRecallTest, RelationBelowRankKIsIgnored) {
  const DatasetSplit gt = testing::Split({RiderScene()});
  SceneGraph pred = RiderScene();
  pred.relations = {Rel(1, 0, 1, 0.9), Rel(0, 1, 0, 0.8)};
  EvalConfig config = EvalConfig::VisualGenome();
  config.k_values = {2};
  const double before =
      VgRecall(testing::Split({pred}), gt, config).recall_at.at(2);
  pred.relations.push_back(Rel(0, 2, 2, 0.1));
  EXPECT_DOUBLE_EQ(VgRecall(testing::Split({pred}), gt, config).recall_at.at(2),
                   before);
}

TEST(VgRecallTest, DuplicatingImageLeavesRecallUnchanged) {
  SceneGraph pred = RiderScene("a");
  pred.relations = {Rel(0, 1, 0, 0.9)};
  SceneGraph other = RiderScene("b");
  const DatasetSplit gt1 = testing::Split({RiderScene("a"), other});
  const DatasetSplit pred1 = testing::Split({pred, other});
  SceneGraph pred_copy = pred;
  pred_copy.image_id = "c";
  SceneGraph other_copy = other;
  other_copy.image_id = "d";
  const DatasetSplit gt2 =
      testing::Split({RiderScene("a"), other, RiderScene("c"), other_copy});
  const DatasetSplit pred2 = testing::Split({pred, other, pred_copy, other_copy});
  EXPECT_DOUBLE_EQ(
      VgRecall(pred1, gt1, EvalConfig::VisualGenome()).recall_at.at(50),
      VgRecall(pred2, gt2, EvalConfig::VisualGenome()).recall_at.at(50));
}

}  // namespace
}  // namespace sgg
