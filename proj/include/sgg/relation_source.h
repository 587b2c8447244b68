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
#ifndef SGG_RELATION_SOURCE_H_
#define SGG_RELATION_SOURCE_H_

#include <vector>

#include "sgg/core.h"

namespace sgg {

struct ScoredPredicate {
  int predicate = 0;
  double score = 0.0;

  friend bool operator==(const ScoredPredicate&,
                         const ScoredPredicate&) = default;
};

// Anything that turns an object list into relation predictions. Relation
// prediction is decoupled from detection: a source consumes whatever objects
// it is handed, so the ablation harness can swap predicted objects for
// ground-truth ones and re-run it.
class RelationSource {
 public:
  virtual ~RelationSource() = default;

  // Returns `objects_only` (relations ignored) with relations attached.
  virtual SceneGraph Predict(const SceneGraph& objects_only,
                             const EvalConfig& config) const = 0;

  // Ranked predicate distribution for the ordered pair (subject, object) of
  // `graph`, best first. May be empty.
  virtual std::vector<ScoredPredicate> PairDistribution(
      const SceneGraph& graph, int subject_idx, int object_idx) const = 0;

  // Predicate used when PairDistribution has nothing for a pair.
  virtual int FallbackPredicate() const = 0;
};

}  // namespace sgg

#endif  // SGG_RELATION_SOURCE_H_
