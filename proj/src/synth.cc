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
#include "sgg/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "sgg/errors.h"
#include "sgg/ingest.h"
#include "sgg/matching.h"
#include "sgg/parallel.h"

namespace sgg {
namespace {

std::uint64_t Mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string ImageId(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img%06d", index);
  return buf;
}

// Preferred predicate of a label pair, fixed per seed.
int PreferredPredicate(std::uint64_t seed, int subject_label, int object_label,
                       int num_predicates) {
  const std::uint64_t h =
      Mix(Mix(seed ^ 0x51ed270b27f4a1c3ULL) ^
          Mix(static_cast<std::uint64_t>(subject_label) * 0x100000001b3ULL +
              static_cast<std::uint64_t>(object_label)));
  return static_cast<int>(h % static_cast<std::uint64_t>(num_predicates));
}

void RequireRate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must be in [0,1]");
  }
}

SceneGraph GenerateScene(const SynthConfig& config, int image) {
  KeyedRng layout(config.seed, image, KeyedRng::Stage::kLayout);
  KeyedRng labels(config.seed, image, KeyedRng::Stage::kLabels);
  KeyedRng relations(config.seed, image, KeyedRng::Stage::kRelations);
  const double w = config.canvas_width;
  const double h = config.canvas_height;

  SceneGraph graph;
  graph.image_id = ImageId(image);
  const int wanted = layout.UniformInt(config.min_objects, config.max_objects);
  constexpr int kMaxTries = 200;
  for (int k = 0; k < wanted; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxTries && !placed; ++attempt) {
      const double bw = layout.Uniform(0.1, 0.4) * w;
      const double bh = layout.Uniform(0.1, 0.4) * h;
      const double x1 = layout.Uniform(0.0, w - bw);
      const double y1 = layout.Uniform(0.0, h - bh);
      const BoundingBox box(x1, y1, x1 + bw, y1 + bh);
      const bool fits = std::all_of(
          graph.objects.begin(), graph.objects.end(),
          [&](const DetectedObject& o) { return Iou(o.box, box) <= config.max_gt_iou; });
      if (fits) {
        graph.objects.push_back({box, 0, 1.0});
        placed = true;
      }
    }
    if (!placed) break;
  }
  for (auto& obj : graph.objects) {
    obj.label = labels.UniformInt(0, config.num_object_labels - 1);
  }

  // Ordered pairs, overlapping ones favoured, without repetition.
  const int n = static_cast<int>(graph.objects.size());
  std::vector<std::pair<double, std::pair<int, int>>> candidates;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool overlap = Iou(graph.objects[i].box, graph.objects[j].box) > 0.0;
      candidates.push_back({relations.Uniform() * (overlap ? 1.0 : 2.0), {i, j}});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const int wanted_rel = std::min<int>(
      relations.UniformInt(config.min_relations, config.max_relations),
      static_cast<int>(candidates.size()));
  for (int r = 0; r < wanted_rel; ++r) {
    const auto [s, o] = candidates[r].second;
    int predicate = PreferredPredicate(config.seed, graph.objects[s].label,
                                       graph.objects[o].label,
                                       config.num_predicates);
    const bool consistent = relations.Bernoulli(config.label_consistency);
    const int random_predicate = relations.UniformInt(0, config.num_predicates - 1);
    if (!consistent) predicate = random_predicate;
    graph.relations.push_back({s, o, predicate, 1.0});
  }
  return graph;
}

}  // namespace

KeyedRng::KeyedRng(std::uint64_t seed, std::uint64_t image, Stage stage)
    : state_(Mix(Mix(Mix(seed) ^ image) ^ static_cast<std::uint64_t>(stage))) {}

std::uint64_t KeyedRng::Next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double KeyedRng::Uniform() {
  return static_cast<double>(Next() >> 11) * 0x1.0p-53;
}

double KeyedRng::Uniform(double lo, double hi) {
  return lo + (hi - lo) * Uniform();
}

int KeyedRng::UniformInt(int lo, int hi) {
  if (hi <= lo) return lo;
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(Next() % span);
}

bool KeyedRng::Bernoulli(double p) { return Uniform() < p; }

void SynthConfig::Validate() const {
  if (num_images < 0) throw ConfigError("num_images must be >= 0");
  if (min_objects < 1) {
    throw ConfigError("objects_per_image must allow at least one object");
  }
  if (max_objects < min_objects) throw ConfigError("objects_per_image range is empty");
  if (min_relations < 0 || max_relations < min_relations) {
    throw ConfigError("relations_per_image range is invalid");
  }
  if (num_object_labels < 1) throw ConfigError("num_object_labels must be >= 1");
  if (num_predicates < 1) throw ConfigError("num_predicates must be >= 1");
  if (!(canvas_width > 0.0 && canvas_height > 0.0) || !std::isfinite(canvas_width) ||
      !std::isfinite(canvas_height)) {
    throw ConfigError("canvas dimensions must be positive");
  }
  RequireRate(label_consistency, "label_consistency");
  RequireRate(max_gt_iou, "max_gt_iou");
  RequireRate(detection_noise.drop_rate, "drop_rate");
  RequireRate(detection_noise.label_flip_rate, "label_flip_rate");
  RequireRate(relation_noise.pair_drop_rate, "pair_drop_rate");
  RequireRate(relation_noise.predicate_flip_rate, "predicate_flip_rate");
  if (!(detection_noise.box_jitter >= 0.0) || !std::isfinite(detection_noise.box_jitter)) {
    throw ConfigError("box_jitter must be >= 0");
  }
}

SynthConfig ParseSynthConfig(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("synth config must be a JSON object");
  }
  SynthConfig config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else if (key == "num_images") {
        config.num_images = value.get<int>();
      } else if (key == "objects_per_image") {
        config.min_objects = value.at(0).get<int>();
        config.max_objects = value.at(1).get<int>();
      } else if (key == "relations_per_image") {
        config.min_relations = value.at(0).get<int>();
        config.max_relations = value.at(1).get<int>();
      } else if (key == "num_object_labels") {
        config.num_object_labels = value.get<int>();
      } else if (key == "num_predicates") {
        config.num_predicates = value.get<int>();
      } else if (key == "canvas") {
        config.canvas_width = value.at(0).get<double>();
        config.canvas_height = value.at(1).get<double>();
      } else if (key == "label_consistency") {
        config.label_consistency = value.get<double>();
      } else if (key == "max_gt_iou") {
        config.max_gt_iou = value.get<double>();
      } else if (key == "detection_noise") {
        for (const auto& [k, v] : value.items()) {
          if (k == "drop_rate") config.detection_noise.drop_rate = v.get<double>();
          else if (k == "box_jitter") config.detection_noise.box_jitter = v.get<double>();
          else if (k == "label_flip_rate") config.detection_noise.label_flip_rate = v.get<double>();
          else throw ConfigError("unknown detection_noise key \"" + k + "\"");
        }
      } else if (key == "relation_noise") {
        for (const auto& [k, v] : value.items()) {
          if (k == "pair_drop_rate") config.relation_noise.pair_drop_rate = v.get<double>();
          else if (k == "predicate_flip_rate") config.relation_noise.predicate_flip_rate = v.get<double>();
          else throw ConfigError("unknown relation_noise key \"" + k + "\"");
        }
      } else {
        throw ConfigError("unknown synth config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synth config: ") + e.what());
  }
  config.Validate();
  return config;
}

std::string SynthConfigToJson(const SynthConfig& config) {
  nlohmann::ordered_json j;
  j["seed"] = config.seed;
  j["num_images"] = config.num_images;
  j["objects_per_image"] = {config.min_objects, config.max_objects};
  j["relations_per_image"] = {config.min_relations, config.max_relations};
  j["num_object_labels"] = config.num_object_labels;
  j["num_predicates"] = config.num_predicates;
  j["canvas"] = {config.canvas_width, config.canvas_height};
  j["label_consistency"] = config.label_consistency;
  j["max_gt_iou"] = config.max_gt_iou;
  j["detection_noise"] = {{"drop_rate", config.detection_noise.drop_rate},
                          {"box_jitter", config.detection_noise.box_jitter},
                          {"label_flip_rate", config.detection_noise.label_flip_rate}};
  j["relation_noise"] = {
      {"pair_drop_rate", config.relation_noise.pair_drop_rate},
      {"predicate_flip_rate", config.relation_noise.predicate_flip_rate}};
  return j.dump(2);
}

SynthRelationModel::SynthRelationModel(DatasetSplit ground_truth,
                                       RelationNoise noise, std::uint64_t seed,
                                       int num_predicates)
    : ground_truth_(std::move(ground_truth)) {
  const auto& graphs = ground_truth_.graphs();
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    KeyedRng drop(seed, i, KeyedRng::Stage::kPairDrop);
    KeyedRng flip(seed, i, KeyedRng::Stage::kPredicateFlip);
    std::vector<Decision> decisions;
    for (const auto& rel : graphs[i].relations) {
      Decision d;
      d.dropped = drop.Bernoulli(noise.pair_drop_rate);
      d.flipped = num_predicates > 1 && flip.Bernoulli(noise.predicate_flip_rate);
      const int offset = flip.UniformInt(1, std::max(1, num_predicates - 1));
      const double low_score = flip.Uniform(0.2, 0.6);
      d.predicate = d.flipped ? (rel.predicate + offset) % num_predicates
                              : rel.predicate;
      d.score = d.flipped ? low_score : 1.0;
      decisions.push_back(d);
    }
    decisions_.emplace(graphs[i].image_id, std::move(decisions));
  }
}

const std::vector<SynthRelationModel::Decision>& SynthRelationModel::Decisions(
    std::string_view image_id) const {
  static const std::vector<Decision> kNone;
  auto it = decisions_.find(std::string(image_id));
  return it == decisions_.end() ? kNone : it->second;
}

std::vector<int> SynthRelationModel::MapToGroundTruth(const SceneGraph& graph,
                                                      const SceneGraph& gt) const {
  std::vector<int> map(graph.objects.size(), -1);
  for (std::size_t a = 0; a < graph.objects.size(); ++a) {
    double best = -1.0;
    for (std::size_t g = 0; g < gt.objects.size(); ++g) {
      const double iou = Iou(graph.objects[a].box, gt.objects[g].box);
      if (iou >= 0.5 && iou > best) {
        best = iou;
        map[a] = static_cast<int>(g);
      }
    }
  }
  return map;
}

SceneGraph SynthRelationModel::Predict(const SceneGraph& objects_only,
                                       const EvalConfig&) const {
  SceneGraph out;
  out.image_id = objects_only.image_id;
  out.objects = objects_only.objects;
  const SceneGraph* gt = ground_truth_.Find(objects_only.image_id);
  if (gt == nullptr) return out;
  const std::vector<int> map = MapToGroundTruth(out, *gt);
  const auto& decisions = Decisions(gt->image_id);
  const int n = static_cast<int>(out.objects.size());
  for (std::size_t r = 0; r < gt->relations.size(); ++r) {
    const Decision& d = decisions[r];
    if (d.dropped) continue;
    const auto& rel = gt->relations[r];
    for (int a = 0; a < n; ++a) {
      if (map[a] != rel.subject_idx) continue;
      for (int b = 0; b < n; ++b) {
        if (a == b || map[b] != rel.object_idx) continue;
        out.relations.push_back({a, b, d.predicate, d.score});
      }
    }
  }
  return out;
}

std::vector<ScoredPredicate> SynthRelationModel::PairDistribution(
    const SceneGraph& graph, int subject_idx, int object_idx) const {
  std::vector<ScoredPredicate> out;
  const SceneGraph* gt = ground_truth_.Find(graph.image_id);
  if (gt == nullptr) return out;
  const std::vector<int> map = MapToGroundTruth(graph, *gt);
  const auto& decisions = Decisions(gt->image_id);
  for (std::size_t r = 0; r < gt->relations.size(); ++r) {
    const auto& rel = gt->relations[r];
    if (rel.subject_idx == map.at(subject_idx) &&
        rel.object_idx == map.at(object_idx)) {
      out.push_back({decisions[r].predicate, decisions[r].score});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredPredicate& a, const ScoredPredicate& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.predicate < b.predicate;
            });
  return out;
}

Vocabulary SynthVocabulary(const SynthConfig& config) {
  std::vector<std::string> objects, predicates;
  for (int i = 0; i < config.num_object_labels; ++i) {
    objects.push_back("obj" + std::to_string(i));
  }
  for (int i = 0; i < config.num_predicates; ++i) {
    predicates.push_back("pred" + std::to_string(i));
  }
  return Vocabulary(std::move(objects), std::move(predicates));
}

DatasetSplit GenerateGroundTruth(const SynthConfig& config, int threads) {
  config.Validate();
  std::vector<SceneGraph> scenes(config.num_images);
  ParallelFor(scenes.size(), threads, [&](std::size_t i) {
    scenes[i] = GenerateScene(config, static_cast<int>(i));
  });
  DatasetSplit split("gt");
  for (auto& s : scenes) split.Add(std::move(s));
  return split;
}

DatasetSplit DegradeDetections(const DatasetSplit& ground_truth,
                               const SynthConfig& config,
                               std::vector<Corruption>* log, int threads) {
  config.Validate();
  const DetectionNoise& noise = config.detection_noise;
  const auto& graphs = ground_truth.graphs();
  std::vector<SceneGraph> out(graphs.size());
  std::vector<std::vector<Corruption>> logs(graphs.size());
  ParallelFor(graphs.size(), threads, [&](std::size_t i) {
    const SceneGraph& gt = graphs[i];
    KeyedRng drop(config.seed, i, KeyedRng::Stage::kDrop);
    KeyedRng jitter(config.seed, i, KeyedRng::Stage::kJitter);
    KeyedRng flip(config.seed, i, KeyedRng::Stage::kFlip);
    SceneGraph& det = out[i];
    det.image_id = gt.image_id;
    for (std::size_t k = 0; k < gt.objects.size(); ++k) {
      const DetectedObject& orig = gt.objects[k];
      // Every stage draws for every object so one object's noise does not
      // depend on what happened to the others.
      const bool dropped = drop.Bernoulli(noise.drop_rate);
      double d[4];
      for (double& v : d) v = jitter.Uniform(-1.0, 1.0) * noise.box_jitter;
      const bool flipped =
          config.num_object_labels > 1 && flip.Bernoulli(noise.label_flip_rate);
      const int offset = flip.UniformInt(1, std::max(1, config.num_object_labels - 1));
      if (dropped) {
        logs[i].push_back({gt.image_id, "drop", static_cast<int>(k), ""});
        continue;
      }
      DetectedObject obj = orig;
      if (noise.box_jitter > 0.0) {
        const BoundingBox& b = orig.box;
        auto clamp_x = [&](double v) { return std::clamp(v, 0.0, config.canvas_width); };
        auto clamp_y = [&](double v) { return std::clamp(v, 0.0, config.canvas_height); };
        double x1 = clamp_x(b.x1() + d[0] * b.width());
        double y1 = clamp_y(b.y1() + d[1] * b.height());
        double x2 = clamp_x(b.x2() + d[2] * b.width());
        double y2 = clamp_y(b.y2() + d[3] * b.height());
        if (x1 > x2) std::swap(x1, x2);
        if (y1 > y2) std::swap(y1, y2);
        obj.box = BoundingBox(x1, y1, x2, y2);
        char detail[48];
        std::snprintf(detail, sizeof(detail), "iou=%.6f", Iou(obj.box, b));
        logs[i].push_back({gt.image_id, "jitter", static_cast<int>(k), detail});
      }
      if (flipped) {
        obj.label = (orig.label + offset) % config.num_object_labels;
        logs[i].push_back({gt.image_id, "flip", static_cast<int>(k),
                           std::to_string(orig.label) + "->" + std::to_string(obj.label)});
      }
      obj.score = Iou(obj.box, orig.box) * (flipped ? 0.5 : 1.0);
      det.objects.push_back(obj);
    }
  });
  DatasetSplit split("detections");
  for (auto& g : out) split.Add(std::move(g));
  if (log != nullptr) {
    for (auto& l : logs) log->insert(log->end(), l.begin(), l.end());
  }
  return split;
}

SynthDataset Generate(const SynthConfig& config, int threads) {
  config.Validate();
  SynthDataset data;
  data.vocabulary = SynthVocabulary(config);
  data.ground_truth = GenerateGroundTruth(config, threads);
  data.detections = DegradeDetections(data.ground_truth, config,
                                      &data.corruptions, threads);
  const SynthRelationModel model(data.ground_truth, config.relation_noise,
                                 config.seed, config.num_predicates);
  const auto& dets = data.detections.graphs();
  std::vector<SceneGraph> preds(dets.size());
  const EvalConfig eval;
  ParallelFor(dets.size(), threads,
              [&](std::size_t i) { preds[i] = model.Predict(dets[i], eval); });
  data.predictions = DatasetSplit("predictions");
  for (auto& p : preds) data.predictions.Add(std::move(p));

  // Relation corruptions follow the detection ones, image by image.
  for (const SceneGraph& gt : data.ground_truth) {
    const auto& decisions = model.Decisions(gt.image_id);
    for (std::size_t r = 0; r < decisions.size(); ++r) {
      if (decisions[r].dropped) {
        data.corruptions.push_back({gt.image_id, "pair_drop", static_cast<int>(r), ""});
      }
      if (decisions[r].flipped) {
        data.corruptions.push_back(
            {gt.image_id, "predicate_flip", static_cast<int>(r),
             std::to_string(gt.relations[r].predicate) + "->" +
                 std::to_string(decisions[r].predicate)});
      }
    }
  }
  return data;
}

std::string FormatCorruptionLog(const std::vector<Corruption>& log) {
  std::string out = "image_id\tstage\tindex\tdetail\n";
  for (const auto& c : log) {
    out += c.image_id + "\t" + c.stage + "\t" + std::to_string(c.index) + "\t" +
           c.detail + "\n";
  }
  return out;
}

void WriteSynthDataset(const SynthDataset& dataset,
                       const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create \"" + dir.string() + "\": " + ec.message());
  WriteVocabulary(dir / "vocab.txt", dataset.vocabulary);
  WriteSceneGraphs(dir / "gt.tsv", dataset.ground_truth, dataset.vocabulary);
  WriteSceneGraphs(dir / "detections.tsv", dataset.detections, dataset.vocabulary);
  WriteSceneGraphs(dir / "predictions.tsv", dataset.predictions, dataset.vocabulary);
  WriteFile(dir / "corruptions.tsv", FormatCorruptionLog(dataset.corruptions));
}

}  // namespace sgg
