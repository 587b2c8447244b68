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
#ifndef SGG_ADAPTERS_H_
#define SGG_ADAPTERS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sgg/core.h"

namespace sgg {

// Converters from public annotation releases to the scene-graph TSV schema.
//
// oi-vrd-2018: Open Images Challenge 2018 VRD CSVs with header
//   ImageID,LabelName1,LabelName2,XMin1,XMax1,YMin1,YMax1,
//   XMin2,XMax2,YMin2,YMax2,RelationshipLabel
//   Coordinates stay normalized to [0,1]. Rows with the attribute
//   relationship "is" are skipped. inputs.class_descriptions (optional)
//   maps /m/ ids to names.
// vg-sgg-h5: the IMP preprocessing of Visual Genome (VG-SGG.h5 plus
//   VG-SGG-dicts.json), split by the h5 "split" flag. inputs.image_data
//   (optional) supplies image ids.
struct AdapterSplit {
  std::string name;
  std::filesystem::path source;  // oi: CSV file
  int split_flag = 0;            // vg: value of the h5 "split" dataset
  std::filesystem::path out;
};

struct AdapterManifest {
  std::string format;
  std::map<std::string, std::filesystem::path> inputs;
  std::filesystem::path vocabulary_out;
  std::vector<AdapterSplit> splits;

  // Relative paths resolve against `base_dir`. Throws ConfigError.
  static AdapterManifest FromJson(std::string_view json_text,
                                  const std::filesystem::path& base_dir);
};

struct SplitCounts {
  std::string name;
  std::size_t images = 0;
  std::size_t objects = 0;
  std::size_t relations = 0;
};

struct ConversionReport {
  std::string format;
  std::vector<SplitCounts> splits;
  std::size_t object_labels = 0;
  std::size_t predicate_labels = 0;
  std::map<std::string, std::string> input_sha256;  // path -> digest

  std::string ToJson() const;
};

struct Conversion {
  Vocabulary vocabulary;
  std::vector<DatasetSplit> splits;  // manifest order
  ConversionReport report;
};

// Converts in memory. Throws AdapterError naming the first offending record
// on unrecognized input, or when two splits share an image id.
Conversion ConvertDataset(const AdapterManifest& manifest);

// ConvertDataset, then writes the vocabulary and every split.
ConversionReport Convert(const AdapterManifest& manifest);

bool HaveHdf5Support();

namespace internal {
// Format-specific entry points used by ConvertDataset.
Conversion ConvertOpenImages(const AdapterManifest& manifest);
Conversion ConvertVisualGenomeH5(const AdapterManifest& manifest);
}  // namespace internal

}  // namespace sgg

#endif  // SGG_ADAPTERS_H_
