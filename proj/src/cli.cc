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
#include "sgg/cli.h"

#include <chrono>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgg/ablation.h"
#include "sgg/adapters.h"
#include "sgg/checksum.h"
#include "sgg/compare.h"
#include "sgg/errors.h"
#include "sgg/freq_baseline.h"
#include "sgg/ingest.h"
#include "sgg/oi_metrics.h"
#include "sgg/synth.h"
#include "sgg/vg_metrics.h"

namespace sgg {
namespace {

using ordered_json = nlohmann::ordered_json;

// Evaluation flags shared by several subcommands. Unset flags fall back to
// the optional --config JSON, then to the dataset defaults.
struct EvalFlags {
  std::string config_path;
  std::string task;
  std::string mode;
  std::optional<int> max_per_pair;
  std::vector<int> k_values;
  std::optional<double> iou;
  std::string recall;
  int threads = 1;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON file with EvalConfig fields")
        ->check(CLI::ExistingFile);
    app->add_option("--task", task, "predcls|sgcls|sgdet")
        ->check(CLI::IsMember({"predcls", "sgcls", "sgdet"}));
    app->add_option("--mode", mode, "constrained|unconstrained")
        ->check(CLI::IsMember({"constrained", "unconstrained"}));
    app->add_option("--max-per-pair", max_per_pair,
                    "predicates kept per pair in unconstrained mode")
        ->check(CLI::PositiveNumber);
    app->add_option("--k", k_values, "Recall@K cutoffs")->delimiter(',');
    app->add_option("--iou", iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
    app->add_option("--recall", recall, "macro|micro recall averaging")
        ->check(CLI::IsMember({"macro", "micro"}));
    app->add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);
  }

  EvalConfig Resolve(EvalConfig config) const {
    if (!config_path.empty()) {
      const auto j = nlohmann::json::parse(ReadFile(config_path), nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        throw ConfigError("--config must hold a JSON object");
      }
      try {
        for (const auto& [key, value] : j.items()) {
          if (key == "task") config.task = ParseTask(value.get<std::string>());
          else if (key == "mode") config.mode = ParseMode(value.get<std::string>());
          else if (key == "max_predicates_per_pair") config.max_predicates_per_pair = value.get<int>();
          else if (key == "k_values") config.k_values = value.get<std::vector<int>>();
          else if (key == "iou_threshold") config.iou_threshold = value.get<double>();
          else if (key == "recall_averaging") {
            config.recall_averaging = value.get<std::string>() == "micro"
                                          ? RecallAveraging::kMicro
                                          : RecallAveraging::kMacro;
          } else if (key == "threads") config.threads = value.get<int>();
          else throw ConfigError("unknown config key \"" + key + "\"");
        }
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed --config: ") + e.what());
      }
    }
    if (!task.empty()) config.task = ParseTask(task);
    if (!mode.empty()) config.mode = ParseMode(mode);
    if (max_per_pair) config.max_predicates_per_pair = *max_per_pair;
    if (!k_values.empty()) config.k_values = k_values;
    if (iou) config.iou_threshold = *iou;
    if (!recall.empty()) {
      config.recall_averaging =
          recall == "micro" ? RecallAveraging::kMicro : RecallAveraging::kMacro;
    }
    config.threads = threads;
    config.Validate();
    return config;
  }
};

ordered_json ConfigJson(const EvalConfig& c) {
  ordered_json j;
  j["task"] = std::string(TaskName(c.task));
  j["mode"] = std::string(ModeName(c.mode));
  j["max_predicates_per_pair"] = c.max_predicates_per_pair;
  j["k_values"] = c.k_values;
  j["iou_threshold"] = c.iou_threshold;
  j["recall_averaging"] =
      c.recall_averaging == RecallAveraging::kMicro ? "micro" : "macro";
  return j;
}

// Report destination plus the run manifest that accompanies it.
struct Output {
  std::string out_path;
  std::string manifest_path;
  std::string format = "tsv";

  void Register(CLI::App* app, bool with_format = true) {
    app->add_option("--out", out_path, "report file (default: stdout)");
    app->add_option("--run-manifest", manifest_path,
                    "run manifest path when reporting to stdout");
    if (with_format) {
      app->add_option("--format", format, "tsv|json")
          ->check(CLI::IsMember({"tsv", "json"}));
    }
  }
};

class Run {
 public:
  Run(std::string subcommand, std::ostream& out, std::ostream& err)
      : subcommand_(std::move(subcommand)),
        out_(out),
        err_(err),
        start_(std::chrono::steady_clock::now()) {}

  void AddInput(const std::string& role, const std::string& path) {
    inputs_[role] = {{"path", path}, {"sha256", Sha256File(path)}};
  }
  ordered_json& config() { return config_; }

  // Writes `text` to --out or stdout, then the manifest.
  void Emit(const Output& output, const std::string& text) {
    if (output.out_path.empty()) {
      out_ << text;
      out_.flush();
    } else {
      WriteFile(output.out_path, text);
    }
    ordered_json m;
    m["subcommand"] = subcommand_;
    m["tool_version"] = kToolVersion;
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    if (!output.out_path.empty()) {
      WriteFile(output.out_path + ".manifest.json", m.dump(2) + "\n");
    } else if (!output.manifest_path.empty()) {
      WriteFile(output.manifest_path, m.dump(2) + "\n");
    } else {
      err_ << m.dump() << "\n";
    }
  }

 private:
  std::string subcommand_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  ordered_json config_ = ordered_json::object();
  ordered_json inputs_ = ordered_json::object();
};

Vocabulary LoadVocabulary(const std::string& vocab_path,
                          const std::string& fallback_tsv, Run& run) {
  if (!vocab_path.empty()) {
    run.AddInput("vocab", vocab_path);
    return ReadVocabulary(vocab_path);
  }
  return InferVocabulary(ReadFile(fallback_tsv));
}

DatasetSplit LoadSplit(const std::string& role, const std::string& path,
                       const Vocabulary& vocab, int threads, Run& run) {
  run.AddInput(role, path);
  return ReadSceneGraphs(path, vocab, threads);
}

std::vector<std::string> SplitComma(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Scene graph generation evaluation toolkit", "sggbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "compute VG or OI metrics");
  std::string eval_dataset, eval_pred, eval_gt, eval_vocab;
  EvalFlags eval_flags;
  Output eval_out;
  evaluate->add_option("--dataset", eval_dataset, "vg|oi")
      ->required()
      ->check(CLI::IsMember({"vg", "oi"}));
  evaluate->add_option("--pred", eval_pred, "prediction TSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--gt", eval_gt, "ground-truth TSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--vocab", eval_vocab, "vocabulary file (default: inferred from --gt)")
      ->check(CLI::ExistingFile);
  eval_flags.Register(evaluate);
  eval_out.Register(evaluate);

  // baseline build | predict
  auto* baseline = app.add_subcommand("baseline", "frequency-prior baselines");
  baseline->require_subcommand(1);
  auto* build = baseline->add_subcommand("build", "count a prior from training graphs");
  std::string build_train, build_vocab, build_variant = "freq-overlap";
  Output build_out;
  build->add_option("--train", build_train, "training TSV")->required()->check(CLI::ExistingFile);
  build->add_option("--vocab", build_vocab, "vocabulary file")->check(CLI::ExistingFile);
  build->add_option("--variant", build_variant, "freq|freq-overlap")
      ->check(CLI::IsMember({"freq", "freq-overlap"}));
  build_out.Register(build, false);
  int build_threads = 1;
  build->add_option("--threads", build_threads, "worker threads")
      ->check(CLI::PositiveNumber);

  auto* predict = baseline->add_subcommand("predict", "predict relations from a prior");
  std::string predict_prior, predict_dets, predict_vocab, predict_variant = "freq-overlap",
                                                          score_mode = "probability";
  EvalFlags predict_flags;
  Output predict_out;
  predict->add_option("--prior", predict_prior, "prior TSV")->required()->check(CLI::ExistingFile);
  predict->add_option("--detections", predict_dets, "detections TSV")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--vocab", predict_vocab, "vocabulary file")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--variant", predict_variant, "freq|freq-overlap")
      ->check(CLI::IsMember({"freq", "freq-overlap"}));
  predict->add_option("--score-mode", score_mode, "probability|raw")
      ->check(CLI::IsMember({"probability", "raw"}));
  predict_flags.Register(predict);
  predict_out.Register(predict, false);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "ground-truth substitution ablation");
  std::string abl_gt, abl_dets, abl_vocab, abl_levels = "predicted,gt-objects,gt-pairs",
                                           abl_relations = "freq-overlap", abl_train,
                                           abl_prior, abl_rel_file, abl_rel_gt_file,
                                           abl_metric = "oi";
  EvalFlags abl_flags;
  Output abl_out;
  ablate->add_option("--gt", abl_gt, "ground-truth TSV")->required()->check(CLI::ExistingFile);
  ablate->add_option("--detections", abl_dets, "detections TSV")
      ->required()
      ->check(CLI::ExistingFile);
  ablate->add_option("--vocab", abl_vocab, "vocabulary file")->check(CLI::ExistingFile);
  ablate->add_option("--levels", abl_levels, "comma list of predicted,gt-objects,gt-pairs");
  ablate->add_option("--relations", abl_relations, "freq|freq-overlap|file")
      ->check(CLI::IsMember({"freq", "freq-overlap", "file"}));
  ablate->add_option("--train", abl_train, "training TSV for the prior")->check(CLI::ExistingFile);
  ablate->add_option("--prior", abl_prior, "prior TSV")->check(CLI::ExistingFile);
  ablate->add_option("--relations-file", abl_rel_file, "prediction TSV (file source)")
      ->check(CLI::ExistingFile);
  ablate->add_option("--relations-gt-file", abl_rel_gt_file,
                     "predictions made on GT objects (file source)")
      ->check(CLI::ExistingFile);
  ablate->add_option("--metric", abl_metric, "vg|oi")->check(CLI::IsMember({"vg", "oi"}));
  abl_flags.Register(ablate);
  abl_out.Register(ablate);

  // compare
  auto* compare = app.add_subcommand("compare", "cross-model similarity / ensemble matrices");
  std::vector<std::string> cmp_inputs, cmp_names;
  std::string cmp_gt, cmp_vocab, cmp_kind = "similarity", cmp_identity = "exact";
  int cmp_threads = 1;
  Output cmp_out;
  compare->add_option("--inputs", cmp_inputs, "prediction TSVs")
      ->required()
      ->check(CLI::ExistingFile);
  compare->add_option("--names", cmp_names, "model names (default: file stems)");
  compare->add_option("--gt", cmp_gt, "ground-truth TSV")->check(CLI::ExistingFile);
  compare->add_option("--vocab", cmp_vocab, "vocabulary file")->check(CLI::ExistingFile);
  compare->add_option("--kind", cmp_kind, "similarity|ensemble")
      ->check(CLI::IsMember({"similarity", "ensemble"}));
  compare->add_option("--identity", cmp_identity, "exact|iou instance identity")
      ->check(CLI::IsMember({"exact", "iou"}));
  compare->add_option("--threads", cmp_threads, "worker threads")
      ->check(CLI::PositiveNumber);
  cmp_out.Register(compare, false);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark");
  std::string synth_config, synth_dir;
  int synth_threads = 1;
  std::string synth_manifest;
  synth->add_option("--config", synth_config, "synth config JSON")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--out", synth_dir, "output directory")->required();
  synth->add_option("--threads", synth_threads, "worker threads")
      ->check(CLI::PositiveNumber);

  // convert
  auto* convert = app.add_subcommand("convert", "convert VG/OI releases to TSV");
  std::string convert_manifest;
  Output convert_out;
  convert->add_option("--manifest", convert_manifest, "adapter manifest JSON")
      ->required()
      ->check(CLI::ExistingFile);
  convert_out.Register(convert, false);

  std::vector<const char*> argv{"sggbench"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) {
      err << sub->help();
      if (!sub->get_subcommands().empty()) err << sub->get_subcommands()[0]->help();
    }
    if (app.get_subcommands().empty()) err << app.help();
    return 1;
  }

  try {
    if (*evaluate) {
      Run run("evaluate", out, err);
      const EvalConfig defaults =
          eval_dataset == "vg" ? EvalConfig::VisualGenome() : EvalConfig::OpenImages();
      const EvalConfig config = eval_flags.Resolve(defaults);
      const Vocabulary vocab = LoadVocabulary(eval_vocab, eval_gt, run);
      const DatasetSplit gt = LoadSplit("gt", eval_gt, vocab, config.threads, run);
      const DatasetSplit pred = LoadSplit("pred", eval_pred, vocab, config.threads, run);
      run.config() = ConfigJson(config);
      run.config()["dataset"] = eval_dataset;
      const MetricReport report = eval_dataset == "vg"
                                      ? VgRecall(pred, gt, config).ToReport()
                                      : OiEvaluate(pred, gt, config).ToReport();
      run.Emit(eval_out, FormatReport(report, ParseReportFormat(eval_out.format)));
      return 0;
    }

    if (*build) {
      Run run("baseline build", out, err);
      const Vocabulary vocab = LoadVocabulary(build_vocab, build_train, run);
      const DatasetSplit train = LoadSplit("train", build_train, vocab, build_threads, run);
      const PriorVariant variant = ParsePriorVariant(build_variant);
      run.config()["variant"] = build_variant;
      run.Emit(build_out, FormatPrior(BuildPrior(train, variant, build_threads), vocab));
      return 0;
    }

    if (*predict) {
      Run run("baseline predict", out, err);
      const EvalConfig config = predict_flags.Resolve(EvalConfig::VisualGenome());
      run.AddInput("vocab", predict_vocab);
      const Vocabulary vocab = ReadVocabulary(predict_vocab);
      const PriorVariant variant = ParsePriorVariant(predict_variant);
      run.AddInput("prior", predict_prior);
      const FrequencyPrior prior = ReadPrior(predict_prior, vocab, variant);
      const DatasetSplit dets =
          LoadSplit("detections", predict_dets, vocab, config.threads, run);
      run.config() = ConfigJson(config);
      run.config()["variant"] = predict_variant;
      run.config()["score_mode"] = score_mode;
      const DatasetSplit preds = PredictSplitWithPrior(
          dets, prior, config,
          score_mode == "raw" ? PriorScoreMode::kRawCount : PriorScoreMode::kProbability);
      std::ostringstream text;
      WriteSceneGraphs(text, preds, vocab);
      run.Emit(predict_out, text.str());
      return 0;
    }

    if (*ablate) {
      Run run("ablate", out, err);
      const AblationMetric metric = ParseAblationMetric(abl_metric);
      const EvalConfig config = abl_flags.Resolve(
          metric == AblationMetric::kVg ? EvalConfig::VisualGenome() : EvalConfig::OpenImages());
      std::vector<AblationLevel> levels;
      for (const auto& name : SplitComma(abl_levels)) levels.push_back(ParseAblationLevel(name));
      if (levels.empty()) throw ConfigError("--levels names no level");
      const Vocabulary vocab = LoadVocabulary(abl_vocab, abl_gt, run);
      const DatasetSplit gt = LoadSplit("gt", abl_gt, vocab, config.threads, run);
      const DatasetSplit dets = LoadSplit("detections", abl_dets, vocab, config.threads, run);

      std::unique_ptr<RelationSource> source;
      if (abl_relations == "file") {
        if (abl_rel_file.empty()) throw ConfigError("--relations file needs --relations-file");
        DatasetSplit preds = LoadSplit("relations", abl_rel_file, vocab, config.threads, run);
        std::optional<DatasetSplit> on_gt;
        if (!abl_rel_gt_file.empty()) {
          on_gt = LoadSplit("relations_gt", abl_rel_gt_file, vocab, config.threads, run);
        }
        source = std::make_unique<FileRelationSource>(std::move(preds), std::move(on_gt));
      } else {
        const PriorVariant variant = ParsePriorVariant(abl_relations);
        FrequencyPrior prior(variant);
        if (!abl_prior.empty()) {
          run.AddInput("prior", abl_prior);
          prior = ReadPrior(abl_prior, vocab, variant);
        } else if (!abl_train.empty()) {
          prior = BuildPrior(LoadSplit("train", abl_train, vocab, config.threads, run),
                             variant, config.threads);
        } else {
          throw ConfigError("frequency relations need --train or --prior");
        }
        source = std::make_unique<FreqRelationSource>(std::move(prior));
      }
      run.config() = ConfigJson(config);
      run.config()["metric"] = abl_metric;
      run.config()["relations"] = abl_relations;
      run.config()["levels"] = abl_levels;
      const AblationResult result = RunAblation(gt, dets, *source, levels, metric, config);
      run.Emit(abl_out, FormatReport(result.Flatten(), ParseReportFormat(abl_out.format)));
      return 0;
    }

    if (*compare) {
      Run run("compare", out, err);
      const ComparisonKind kind = ParseComparisonKind(cmp_kind);
      if (kind == ComparisonKind::kEnsembleAccuracy && cmp_gt.empty()) {
        throw ConfigError("--kind ensemble needs --gt");
      }
      if (!cmp_names.empty() && cmp_names.size() != cmp_inputs.size()) {
        throw ConfigError("--names must list one name per input");
      }
      const Vocabulary vocab =
          LoadVocabulary(cmp_vocab, cmp_gt.empty() ? cmp_inputs.front() : cmp_gt, run);
      std::vector<DatasetSplit> models;
      std::vector<std::string> names = cmp_names;
      for (std::size_t i = 0; i < cmp_inputs.size(); ++i) {
        models.push_back(LoadSplit("input" + std::to_string(i), cmp_inputs[i], vocab,
                                   cmp_threads, run));
        if (cmp_names.empty()) {
          names.push_back(std::filesystem::path(cmp_inputs[i]).stem().string());
        }
      }
      run.config()["kind"] = cmp_kind;
      run.config()["identity"] = cmp_identity;
      ComparisonMatrix matrix;
      if (kind == ComparisonKind::kSimilarity) {
        matrix = SimilarityMatrix(names, models,
                                  cmp_identity == "iou" ? InstanceIdentity::kIou
                                                        : InstanceIdentity::kExactBox,
                                  cmp_threads);
      } else {
        const DatasetSplit gt = LoadSplit("gt", cmp_gt, vocab, cmp_threads, run);
        matrix = EnsembleMatrix(names, models, gt, cmp_threads);
      }
      run.Emit(cmp_out, matrix.ToTsv());
      return 0;
    }

    if (*synth) {
      Run run("synth", out, err);
      run.AddInput("config", synth_config);
      const SynthConfig config = ParseSynthConfig(ReadFile(synth_config));
      const SynthDataset data = Generate(config, synth_threads);
      WriteSynthDataset(data, synth_dir);
      run.config() = ordered_json::parse(SynthConfigToJson(config));
      MetricReport counts{{"images", static_cast<double>(data.ground_truth.size())},
                          {"corruptions", static_cast<double>(data.corruptions.size())}};
      Output o;
      o.out_path = (std::filesystem::path(synth_dir) / "summary.tsv").string();
      run.Emit(o, FormatReport(counts, ReportFormat::kTsv));
      return 0;
    }

    if (*convert) {
      Run run("convert", out, err);
      run.AddInput("manifest", convert_manifest);
      const AdapterManifest manifest = AdapterManifest::FromJson(
          ReadFile(convert_manifest),
          std::filesystem::path(convert_manifest).parent_path());
      run.config()["format"] = manifest.format;
      const ConversionReport report = Convert(manifest);
      run.Emit(convert_out, report.ToJson());
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace sgg
