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

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

#include "json.hpp"
#include "sgg/ingest.h"
#include "sgg/synth.h"
#include "test_util.h"

namespace sgg {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string StripDuration(const std::string& manifest) {
  return std::regex_replace(manifest, std::regex("\"duration_seconds\": ?[0-9.eE+-]+"),
                            "\"duration_seconds\":0");
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthConfig config = testing::NoisyConfig(42, 40);
    data_ = Generate(config);
    WriteSynthDataset(data_, dir_.path());
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  testing::TempDir dir_;
  SynthDataset data_;
};

TEST_F(CliTest, EvaluateGroundTruthAgainstItself) {
  const Result r = Invoke({"evaluate", "--dataset", "oi", "--pred", P("gt.tsv"),
                        "--gt", P("gt.tsv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("score\t100.0000\n"), std::string::npos) << r.out;
  // Without --out the manifest goes to the error stream as one JSON line.
  const auto manifest = nlohmann::json::parse(r.err);
  EXPECT_EQ(manifest.at("subcommand"), "evaluate");
  EXPECT_EQ(manifest.at("tool_version"), kToolVersion);
  EXPECT_EQ(manifest.at("config").at("dataset"), "oi");
  EXPECT_TRUE(manifest.at("inputs").contains("gt"));
  EXPECT_EQ(manifest.at("inputs").at("gt").at("sha256").get<std::string>().size(), 64u);
}

TEST_F(CliTest, MissingGtIsUsageError) {
  const Result r = Invoke({"evaluate", "--dataset", "oi", "--pred", P("gt.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--gt"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(Invoke({}).code, 1);
  EXPECT_EQ(Invoke({"frobnicate"}).code, 1);
  EXPECT_EQ(Invoke({"evaluate", "--dataset", "coco", "--pred", P("gt.tsv"), "--gt",
                 P("gt.tsv")})
                .code,
            1);
}

TEST_F(CliTest, HelpAndVersionSucceed) {
  const Result help = Invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("evaluate"), std::string::npos);
  EXPECT_EQ(Invoke({"--version"}).out, std::string(kToolVersion) + "\n");
}

TEST_F(CliTest, UnknownPredicateIsDataError) {
  WriteFile(dir_ / "bad.tsv",
            "img000000\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"obj0\","
            "\"score\":1},{\"box\":[0,0,2,2],\"label\":\"obj1\",\"score\":1}],"
            "\"relations\":[{\"sub\":0,\"obj\":1,\"pred\":\"levitates\","
            "\"score\":1}]}\n");
  const Result r = Invoke({"evaluate", "--dataset", "vg", "--pred", P("bad.tsv"),
                        "--gt", P("gt.tsv"), "--vocab", P("vocab.txt")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("levitates"), std::string::npos) << r.err;
}

TEST_F(CliTest, AlignmentAndContractErrorsAreDataErrors) {
  const std::string gt = ReadFile(dir_ / "gt.tsv");
  WriteFile(dir_ / "one.tsv", gt.substr(0, gt.find('\n') + 1));
  EXPECT_EQ(Invoke({"evaluate", "--dataset", "oi", "--pred", P("one.tsv"),
                 "--gt", P("gt.tsv"), "--vocab", P("vocab.txt")})
                .code,
            2);
  EXPECT_EQ(Invoke({"evaluate", "--dataset", "vg", "--pred", P("detections.tsv"),
                 "--gt", P("gt.tsv"), "--vocab", P("vocab.txt"), "--task",
                 "predcls"})
                .code,
            2);
}

TEST_F(CliTest, IdenticalRunsAreByteIdentical) {
  std::vector<std::string> args = {"evaluate", "--dataset", "oi", "--pred",
                                   P("predictions.tsv"), "--gt", P("gt.tsv"),
                                   "--vocab", P("vocab.txt"), "--out",
                                   P("r1.tsv")};
  ASSERT_EQ(Invoke(args).code, 0);
  args.back() = P("r2.tsv");
  ASSERT_EQ(Invoke(args).code, 0);
  EXPECT_EQ(ReadFile(dir_ / "r1.tsv"), ReadFile(dir_ / "r2.tsv"));
  EXPECT_EQ(StripDuration(ReadFile(dir_ / "r1.tsv.manifest.json")),
            StripDuration(ReadFile(dir_ / "r2.tsv.manifest.json")));
}

TEST_F(CliTest, ThreadsNeverChangeReports) {
  for (const char* dataset : {"oi", "vg"}) {
    std::string first;
    for (const char* threads : {"1", "3"}) {
      const Result r = Invoke({"evaluate", "--dataset", dataset, "--pred",
                            P("predictions.tsv"), "--gt", P("gt.tsv"),
                            "--vocab", P("vocab.txt"), "--threads", threads,
                            "--format", "json"});
      ASSERT_EQ(r.code, 0) << r.err;
      if (first.empty()) first = r.out;
      EXPECT_EQ(r.out, first);
    }
  }
}

TEST_F(CliTest, ConfigFileLayersUnderFlags) {
  WriteFile(dir_ / "cfg.json", R"({"task": "sgdet", "k_values": [5, 10]})");
  Result r = Invoke({"evaluate", "--dataset", "vg", "--pred", P("predictions.tsv"),
                  "--gt", P("gt.tsv"), "--config", P("cfg.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sgdet@5\t"), std::string::npos);
  EXPECT_NE(r.out.find("sgdet@10\t"), std::string::npos);
  r = Invoke({"evaluate", "--dataset", "vg", "--pred", P("predictions.tsv"), "--gt",
           P("gt.tsv"), "--config", P("cfg.json"), "--k", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sgdet@7\t"), std::string::npos);
  EXPECT_EQ(r.out.find("sgdet@5\t"), std::string::npos);
  WriteFile(dir_ / "bad.json", R"({"colour": 1})");
  EXPECT_EQ(Invoke({"evaluate", "--dataset", "vg", "--pred", P("predictions.tsv"),
                 "--gt", P("gt.tsv"), "--config", P("bad.json")})
                .code,
            2);
}

TEST_F(CliTest, BaselineBuildAndPredict) {
  ASSERT_EQ(Invoke({"baseline", "build", "--train", P("gt.tsv"), "--vocab",
                 P("vocab.txt"), "--variant", "freq", "--out", P("prior.tsv")})
                .code,
            0);
  EXPECT_TRUE(std::filesystem::exists(dir_ / "prior.tsv.manifest.json"));
  const Result r = Invoke({"baseline", "predict", "--prior", P("prior.tsv"),
                        "--detections", P("detections.tsv"), "--vocab",
                        P("vocab.txt"), "--variant", "freq", "--out",
                        P("freq.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Vocabulary vocab = ReadVocabulary(dir_ / "vocab.txt");
  const DatasetSplit preds = ReadSceneGraphs(dir_ / "freq.tsv", vocab);
  EXPECT_EQ(preds.size(), data_.detections.size());
  const Result eval = Invoke({"evaluate", "--dataset", "vg", "--pred", P("freq.tsv"),
                           "--gt", P("gt.tsv"), "--vocab", P("vocab.txt")});
  EXPECT_EQ(eval.code, 0) << eval.err;
  EXPECT_EQ(Invoke({"baseline"}).code, 1);
}

TEST_F(CliTest, AblateWithEachSource) {
  const std::vector<std::vector<std::string>> sources = {
      {"--relations", "freq-overlap", "--train", P("gt.tsv")},
      {"--relations", "freq", "--train", P("gt.tsv")},
      {"--relations", "file", "--relations-file", P("predictions.tsv")}};
  for (const auto& source : sources) {
    std::vector<std::string> args = {"ablate", "--gt", P("gt.tsv"), "--detections",
                                     P("detections.tsv"), "--vocab", P("vocab.txt"),
                                     "--metric", "oi"};
    args.insert(args.end(), source.begin(), source.end());
    const Result r = Invoke(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("gt-pairs/triplet_proposal_recall\t100.0000"),
              std::string::npos)
        << r.out;
    EXPECT_NE(r.out.find("delta/predicted->gt-objects/score"), std::string::npos);
  }
  EXPECT_EQ(Invoke({"ablate", "--gt", P("gt.tsv"), "--detections", P("detections.tsv"),
                 "--relations", "freq"})
                .code,
            2);
  EXPECT_EQ(Invoke({"ablate", "--gt", P("gt.tsv"), "--detections", P("detections.tsv"),
                 "--train", P("gt.tsv"), "--levels", "predicted,oracle"})
                .code,
            2);
}

TEST_F(CliTest, CompareMatrices) {
  Result r = Invoke({"compare", "--inputs", P("predictions.tsv"), P("gt.tsv"),
                  "--vocab", P("vocab.txt"), "--names", "model", "truth"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("model\tmodel\ttruth\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("truth\t"), std::string::npos);
  r = Invoke({"compare", "--kind", "ensemble", "--inputs", P("gt.tsv"), "--gt",
           P("gt.tsv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "model\tgt\ngt\t100.0000\n");
  EXPECT_EQ(Invoke({"compare", "--kind", "ensemble", "--inputs", P("gt.tsv")}).code, 2);
  EXPECT_EQ(Invoke({"compare", "--kind", "ensemble", "--inputs",
                 P("predictions.tsv"), "--gt", P("gt.tsv"), "--vocab",
                 P("vocab.txt")})
                .code,
            2);
}

TEST_F(CliTest, SynthWritesDatasetAndIsReproducible) {
  WriteFile(dir_ / "s.json", R"({"seed": 5, "num_images": 15,
                                 "detection_noise": {"drop_rate": 0.2}})");
  ASSERT_EQ(Invoke({"synth", "--config", P("s.json"), "--out", P("a")}).code, 0);
  ASSERT_EQ(Invoke({"synth", "--config", P("s.json"), "--out", P("b"), "--threads",
                 "4"})
                .code,
            0);
  for (const char* f : {"gt.tsv", "detections.tsv", "predictions.tsv",
                        "corruptions.tsv", "vocab.txt"}) {
    EXPECT_EQ(ReadFile(dir_ / "a" / f), ReadFile(dir_ / "b" / f)) << f;
  }
  WriteFile(dir_ / "z.json", R"({"objects_per_image": [0, 0]})");
  EXPECT_EQ(Invoke({"synth", "--config", P("z.json"), "--out", P("c")}).code, 2);
}

TEST_F(CliTest, ConvertOpenImages) {
  WriteFile(dir_ / "val.csv",
            "ImageID,LabelName1,LabelName2,XMin1,XMax1,YMin1,YMax1,XMin2,XMax2,"
            "YMin2,YMax2,RelationshipLabel\n"
            "i1,/m/a,/m/b,0.1,0.5,0.1,0.5,0.4,0.9,0.4,0.9,on\n");
  WriteFile(dir_ / "m.json",
            R"({"format": "oi-vrd-2018", "vocabulary_out": "oi_vocab.txt",
                "splits": [{"name": "val", "source": "val.csv", "out": "oi_val.tsv"}]})");
  const Result r = Invoke({"convert", "--manifest", P("m.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("\"images\": 1"), std::string::npos) << r.out;
  const Result e = Invoke({"evaluate", "--dataset", "oi", "--pred", P("oi_val.tsv"),
                        "--gt", P("oi_val.tsv"), "--vocab", P("oi_vocab.txt")});
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("score\t100.0000"), std::string::npos);
}

}  // namespace
}  // namespace sgg
