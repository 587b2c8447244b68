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
#include "sgg/ingest.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sgg/errors.h"
#include "sgg/synth.h"
#include "test_util.h"

namespace sgg {
namespace {

using testing::Box;
using testing::Graph;
using testing::Obj;
using testing::Rel;

const char kMinimalLine[] =
    "img1\t{\"objects\":[{\"box\":[0,0,10,10],\"label\":\"man\","
    "\"score\":1.0}],\"relations\":[]}\n";

TEST(ParseSceneGraphsTest, MinimalLine) {
  const DatasetSplit split =
      ParseSceneGraphs(kMinimalLine, testing::SmallVocabulary());
  ASSERT_EQ(split.size(), 1u);
  const SceneGraph& g = split.graphs()[0];
  EXPECT_EQ(g.image_id, "img1");
  ASSERT_EQ(g.objects.size(), 1u);
  EXPECT_EQ(g.objects[0].box, Box(0, 0, 10, 10));
  EXPECT_EQ(g.objects[0].label, 0);
  EXPECT_TRUE(g.relations.empty());
}

TEST(ParseSceneGraphsTest, EmptyInputGivesEmptySplit) {
  EXPECT_TRUE(ParseSceneGraphs("", testing::SmallVocabulary()).empty());
  EXPECT_TRUE(ParseSceneGraphs("\n\n", testing::SmallVocabulary()).empty());
}

TEST(ParseSceneGraphsTest, UnknownLabelNamed) {
  const std::string text =
      "img1\t{\"objects\":[{\"box\":[0,0,10,10],\"label\":\"unicorn\","
      "\"score\":1.0}],\"relations\":[]}\n";
  try {
    ParseSceneGraphs(text, testing::SmallVocabulary());
    FAIL() << "expected VocabularyError";
  } catch (const VocabularyError& e) {
    EXPECT_EQ(e.label(), "unicorn");
    EXPECT_NE(std::string(e.what()).find("unicorn"), std::string::npos);
  }
}

TEST(ParseSceneGraphsTest, UnknownPredicateNamed) {
  const std::string text =
      "img1\t{\"objects\":[{\"box\":[0,0,10,10],\"label\":\"man\",\"score\":1},"
      "{\"box\":[0,0,5,5],\"label\":\"hat\",\"score\":1}],"
      "\"relations\":[{\"sub\":0,\"obj\":1,\"pred\":\"juggles\",\"score\":1}]}";
  try {
    ParseSceneGraphs(text, testing::SmallVocabulary());
    FAIL() << "expected VocabularyError";
  } catch (const VocabularyError& e) {
    EXPECT_EQ(e.label(), "juggles");
  }
}

TEST(ParseSceneGraphsTest, MalformedLineCarriesLineNumber) {
  const std::string text = std::string(kMinimalLine) + "img2\t{not json}\n";
  try {
    ParseSceneGraphs(text, testing::SmallVocabulary());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ParseSceneGraphsTest, EarliestErrorReportedWithThreads) {
  std::string text;
  for (int i = 0; i < 50; ++i) {
    text += "img" + std::to_string(i) +
            "\t{\"objects\":[],\"relations\":[]}\n";
  }
  text += "broken line\n";
  text += "img_x\t[]\n";
  for (int threads : {1, 4}) {
    try {
      ParseSceneGraphs(text, testing::SmallVocabulary(), threads);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 51);
    }
  }
}

TEST(ParseSceneGraphsTest, StructuralErrors) {
  const Vocabulary v = testing::SmallVocabulary();
  const char* bad[] = {
      "img\t{\"objects\":[]}",
      "img\t{\"objects\":[{\"box\":[0,0,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[]}",
      "img\t{\"objects\":[{\"box\":[5,0,1,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[]}",
      "img\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"man\",\"score\":2}],"
      "\"relations\":[]}",
      "img\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[{\"sub\":0,\"obj\":3,\"pred\":\"on\",\"score\":1}]}",
      "img\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[{\"sub\":0,\"obj\":0,\"pred\":\"on\",\"score\":1}]}",
      "no tab here",
      "\t{\"objects\":[],\"relations\":[]}",
  };
  for (const char* line : bad) {
    EXPECT_THROW(ParseSceneGraphs(line, v), Error) << line;
  }
}

TEST(ParseSceneGraphsTest, DuplicateImageId) {
  const std::string text = std::string(kMinimalLine) + kMinimalLine;
  EXPECT_THROW(ParseSceneGraphs(text, testing::SmallVocabulary()),
               DuplicateError);
}

TEST(ParseSceneGraphsTest, ToleratesCarriageReturns) {
  std::string text = kMinimalLine;
  text.insert(text.size() - 1, "\r");
  EXPECT_EQ(ParseSceneGraphs(text, testing::SmallVocabulary()).size(), 1u);
}

TEST(WriteSceneGraphsTest, RoundTripIsExact) {
  SynthConfig config = testing::NoisyConfig(7, 40);
  const SynthDataset data = Generate(config);
  for (const DatasetSplit* split :
       {&data.ground_truth, &data.detections, &data.predictions}) {
    std::ostringstream out;
    WriteSceneGraphs(out, *split, data.vocabulary);
    DatasetSplit back = ParseSceneGraphs(out.str(), data.vocabulary);
    back.set_name(split->name());
    EXPECT_EQ(back, *split);
  }
}

TEST(WriteSceneGraphsTest, AwkwardDoublesRoundTrip) {
  const Vocabulary v = testing::SmallVocabulary();
  const DatasetSplit split = testing::Split(
      {Graph("a b\"c", {Obj(Box(1e-9, 1.0 / 3.0, 0.1, 1e300), 0, 0.1 + 0.2),
                         Obj(Box(-5, -5, 0, 0), 4, 5e-324)},
             {Rel(1, 0, 3, 0.7)})},
      "");
  std::ostringstream out;
  WriteSceneGraphs(out, split, v);
  EXPECT_EQ(ParseSceneGraphs(out.str(), v), split);
}

TEST(WriteSceneGraphsTest, FileRoundTrip) {
  testing::TempDir dir;
  const Vocabulary v = testing::SmallVocabulary();
  const DatasetSplit split = testing::Split(
      {Graph("x", {Obj(Box(1, 2, 3, 4), 2, 0.5)})}, "s");
  WriteSceneGraphs(dir / "s.tsv", split, v);
  EXPECT_EQ(ReadSceneGraphs(dir / "s.tsv", v), split);
  EXPECT_THROW(ReadSceneGraphs(dir / "missing.tsv", v), IoError);
}

TEST(VocabularyFileTest, Sections) {
  const Vocabulary v = ParseVocabulary("man\nhorse\n--\nrides\n");
  EXPECT_EQ(v.object_labels(), (std::vector<std::string>{"man", "horse"}));
  EXPECT_EQ(v.predicate_labels(), (std::vector<std::string>{"rides"}));
}

TEST(VocabularyFileTest, DuplicateRejected) {
  EXPECT_THROW(ParseVocabulary("man\nman\n--\nrides\n"), DuplicateError);
}

TEST(VocabularyFileTest, EmptyPredicateSection) {
  const Vocabulary v = ParseVocabulary("man\n--\n");
  EXPECT_EQ(v.num_objects(), 1);
  EXPECT_EQ(v.num_predicates(), 0);
}

TEST(VocabularyFileTest, SeparatorRequiredExactlyOnce) {
  EXPECT_THROW(ParseVocabulary("man\nhorse\n"), ParseError);
  EXPECT_THROW(ParseVocabulary("man\n--\nrides\n--\n"), ParseError);
}

TEST(VocabularyFileTest, FormatRoundTrip) {
  const Vocabulary v = testing::SmallVocabulary();
  const Vocabulary back = ParseVocabulary(FormatVocabulary(v));
  EXPECT_EQ(back.object_labels(), v.object_labels());
  EXPECT_EQ(back.predicate_labels(), v.predicate_labels());
}

TEST(VocabularyFileTest, InferFromSceneGraphs) {
  const std::string text =
      "a\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"hat\",\"score\":1},"
      "{\"box\":[0,0,1,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[{\"sub\":1,\"obj\":0,\"pred\":\"wears\",\"score\":1}]}\n"
      "b\t{\"objects\":[{\"box\":[0,0,1,1],\"label\":\"man\",\"score\":1}],"
      "\"relations\":[]}\n";
  const Vocabulary v = InferVocabulary(text);
  EXPECT_EQ(v.object_labels(), (std::vector<std::string>{"hat", "man"}));
  EXPECT_EQ(v.predicate_labels(), (std::vector<std::string>{"wears"}));
}

TEST(FormatReportTest, FixedFourDecimals) {
  EXPECT_EQ(FormatReport({{"score", 51.08}}, ReportFormat::kTsv),
            "metric\tvalue\nscore\t51.0800\n");
}

TEST(FormatReportTest, EmptyReportIsHeaderOnly) {
  EXPECT_EQ(FormatReport({}, ReportFormat::kTsv), "metric\tvalue\n");
  EXPECT_EQ(FormatReport({}, ReportFormat::kJson), "{}\n");
}

TEST(FormatReportTest, KeysSorted) {
  const std::string tsv = FormatReport({{"b", 1}, {"a", 2}}, ReportFormat::kTsv);
  EXPECT_LT(tsv.find("a\t2.0000"), tsv.find("b\t1.0000"));
  EXPECT_EQ(FormatReport({{"b", 1}, {"a", 2}}, ReportFormat::kJson),
            "{\n  \"a\": 2.0000,\n  \"b\": 1.0000\n}\n");
}

TEST(FormatReportTest, NegativeZeroAndNonFinite) {
  EXPECT_EQ(FormatReport({{"x", -0.00001}}, ReportFormat::kTsv),
            "metric\tvalue\nx\t0.0000\n");
  EXPECT_THROW(FormatReport({{"x", std::nan("")}}, ReportFormat::kTsv),
               ContractError);
  EXPECT_THROW(ParseReportFormat("xml"), ConfigError);
}

TEST(WriteReportTest, WritesFileAndReportsUnwritablePath) {
  testing::TempDir dir;
  WriteReport({{"score", 51.08}}, dir / "r.tsv", ReportFormat::kTsv);
  EXPECT_EQ(ReadFile(dir / "r.tsv"), "metric\tvalue\nscore\t51.0800\n");
  EXPECT_THROW(WriteReport({}, dir / "no" / "such" / "dir" / "r.tsv",
                           ReportFormat::kTsv),
               IoError);
}

// Random byte mutations of valid lines must either parse or raise a
// library error; nothing else may escape.
TEST(ParseSceneGraphsTest, FuzzedLinesAreTotal) {
  const SynthDataset data = Generate(testing::NoisyConfig(3, 10));
  std::ostringstream out;
  WriteSceneGraphs(out, data.predictions, data.vocabulary);
  const std::string base = out.str();
  std::mt19937_64 rng(12345);
  const std::string alphabet = "{}[]\":,0123456789.-eE\t\n\\ abcxyz\x01\xff";
  int parsed = 0;
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text = base;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng() % text.size();
      switch (rng() % 3) {
        case 0:
          text[pos] = alphabet[rng() % alphabet.size()];
          break;
        case 1:
          text.erase(pos, 1 + rng() % 3);
          break;
        default:
          text.insert(pos, 1, alphabet[rng() % alphabet.size()]);
      }
      if (text.empty()) text = "x";
    }
    try {
      ParseSceneGraphs(text, data.vocabulary, 1 + trial % 3);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    }
  }
  EXPECT_EQ(parsed + rejected, 2000);
  EXPECT_GT(rejected, 0);
}

}  // namespace
}  // namespace sgg
