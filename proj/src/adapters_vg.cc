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
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgg/adapters.h"
#include "sgg/checksum.h"
#include "sgg/errors.h"
#include "sgg/ingest.h"

#ifdef SGG_HAVE_HDF5
#include <hdf5.h>
#endif

namespace sgg {

#ifdef SGG_HAVE_HDF5

namespace {

class Handle {
 public:
  Handle(hid_t id, herr_t (*close)(hid_t)) : id_(id), close_(close) {}
  ~Handle() {
    if (id_ >= 0) close_(id_);
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  hid_t get() const { return id_; }

 private:
  hid_t id_;
  herr_t (*close_)(hid_t);
};

bool HasDataset(hid_t file, const char* name) {
  return H5Lexists(file, name, H5P_DEFAULT) > 0;
}

template <typename T>
std::vector<T> ReadDataset(hid_t file, const char* name, hid_t mem_type,
                           std::vector<hsize_t>* dims_out = nullptr) {
  if (!HasDataset(file, name)) {
    throw AdapterError(std::string("VG-SGG h5 lacks dataset \"") + name + "\"");
  }
  Handle ds(H5Dopen2(file, name, H5P_DEFAULT), H5Dclose);
  if (ds.get() < 0) throw AdapterError(std::string("cannot open dataset ") + name);
  Handle space(H5Dget_space(ds.get()), H5Sclose);
  const int rank = H5Sget_simple_extent_ndims(space.get());
  std::vector<hsize_t> dims(rank > 0 ? rank : 0);
  if (rank > 0) H5Sget_simple_extent_dims(space.get(), dims.data(), nullptr);
  const hssize_t n = H5Sget_simple_extent_npoints(space.get());
  std::vector<T> data(static_cast<std::size_t>(n));
  if (n > 0 &&
      H5Dread(ds.get(), mem_type, H5S_ALL, H5S_ALL, H5P_DEFAULT, data.data()) < 0) {
    throw AdapterError(std::string("cannot read dataset ") + name);
  }
  if (dims_out != nullptr) *dims_out = dims;
  return data;
}

std::vector<std::string> LabelsFromDicts(const nlohmann::json& dicts,
                                         const char* idx_to, const char* to_idx) {
  std::vector<std::string> labels;
  if (dicts.contains(idx_to)) {
    const auto& m = dicts.at(idx_to);
    labels.resize(m.size());
    for (const auto& [key, value] : m.items()) {
      const std::size_t idx = std::stoul(key);
      if (idx < 1 || idx > labels.size()) {
        throw AdapterError(std::string("bad index in ") + idx_to + ": " + key);
      }
      labels[idx - 1] = value.get<std::string>();
    }
  } else if (dicts.contains(to_idx)) {
    const auto& m = dicts.at(to_idx);
    labels.resize(m.size());
    for (const auto& [key, value] : m.items()) {
      const auto idx = value.get<std::size_t>();
      if (idx < 1 || idx > labels.size()) {
        throw AdapterError(std::string("bad index in ") + to_idx + " for " + key);
      }
      labels[idx - 1] = key;
    }
  } else {
    throw AdapterError(std::string("VG dicts lack \"") + idx_to + "\" and \"" +
                       to_idx + "\"");
  }
  return labels;
}

}  // namespace

bool HaveHdf5Support() { return true; }

namespace internal {

Conversion ConvertVisualGenomeH5(const AdapterManifest& manifest) {
  auto input = [&](const char* key) {
    auto it = manifest.inputs.find(key);
    if (it == manifest.inputs.end()) {
      throw AdapterError(std::string("vg-sgg-h5 manifest needs inputs.") + key);
    }
    return it->second;
  };
  Conversion conv;
  const auto h5_path = input("h5");
  const auto dicts_path = input("dicts");
  conv.report.input_sha256[h5_path.string()] = Sha256File(h5_path);

  const std::string dicts_text = ReadFile(dicts_path);
  conv.report.input_sha256[dicts_path.string()] = Sha256Hex(dicts_text);
  const auto dicts = nlohmann::json::parse(dicts_text, nullptr, false);
  if (dicts.is_discarded() || !dicts.is_object()) {
    throw AdapterError("VG dicts file is not a JSON object");
  }
  try {
    conv.vocabulary =
        Vocabulary(LabelsFromDicts(dicts, "idx_to_label", "label_to_idx"),
                   LabelsFromDicts(dicts, "idx_to_predicate", "predicate_to_idx"));
  } catch (const nlohmann::json::exception& e) {
    throw AdapterError(std::string("unrecognized VG dicts: ") + e.what());
  } catch (const std::logic_error& e) {
    throw AdapterError(std::string("unrecognized VG dicts: ") + e.what());
  }

  std::vector<std::string> image_ids;
  if (auto it = manifest.inputs.find("image_data"); it != manifest.inputs.end()) {
    const std::string text = ReadFile(it->second);
    conv.report.input_sha256[it->second.string()] = Sha256Hex(text);
    const auto data = nlohmann::json::parse(text, nullptr, false);
    if (data.is_discarded() || !data.is_array()) {
      throw AdapterError("VG image_data must be a JSON array");
    }
    for (const auto& entry : data) {
      if (!entry.is_object() || !entry.contains("image_id")) {
        throw AdapterError("unrecognized VG image_data record: " + entry.dump());
      }
      const auto& id = entry.at("image_id");
      image_ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    }
  }

  H5Eset_auto2(H5E_DEFAULT, nullptr, nullptr);
  Handle file(H5Fopen(h5_path.string().c_str(), H5F_ACC_RDONLY, H5P_DEFAULT),
              H5Fclose);
  if (file.get() < 0) throw AdapterError("cannot open HDF5 file " + h5_path.string());
  const hid_t f = file.get();
  const auto split = ReadDataset<std::int64_t>(f, "split", H5T_NATIVE_INT64);
  const auto first_box = ReadDataset<std::int64_t>(f, "img_to_first_box", H5T_NATIVE_INT64);
  const auto last_box = ReadDataset<std::int64_t>(f, "img_to_last_box", H5T_NATIVE_INT64);
  const auto first_rel = ReadDataset<std::int64_t>(f, "img_to_first_rel", H5T_NATIVE_INT64);
  const auto last_rel = ReadDataset<std::int64_t>(f, "img_to_last_rel", H5T_NATIVE_INT64);
  const auto labels = ReadDataset<std::int64_t>(f, "labels", H5T_NATIVE_INT64);
  const char* box_name = HasDataset(f, "boxes_1024") ? "boxes_1024" : "boxes_512";
  const auto boxes = ReadDataset<double>(f, box_name, H5T_NATIVE_DOUBLE);
  const auto relationships = ReadDataset<std::int64_t>(f, "relationships", H5T_NATIVE_INT64);
  const auto predicates = ReadDataset<std::int64_t>(f, "predicates", H5T_NATIVE_INT64);

  const std::size_t num_images = split.size();
  if (first_box.size() != num_images || last_box.size() != num_images ||
      first_rel.size() != num_images || last_rel.size() != num_images ||
      boxes.size() != 4 * labels.size() ||
      relationships.size() != 2 * predicates.size() ||
      (!image_ids.empty() && image_ids.size() != num_images)) {
    throw AdapterError("VG-SGG h5 datasets have inconsistent sizes");
  }

  for (const AdapterSplit& entry : manifest.splits) {
    DatasetSplit out(entry.name);
    for (std::size_t i = 0; i < num_images; ++i) {
      if (split[i] != entry.split_flag || first_box[i] < 0) continue;
      const auto b0 = static_cast<std::size_t>(first_box[i]);
      const auto b1 = static_cast<std::size_t>(last_box[i]);
      if (b1 < b0 || b1 >= labels.size()) {
        throw AdapterError("image row " + std::to_string(i) + ": bad box range");
      }
      SceneGraph g;
      g.image_id = image_ids.empty() ? "vg" + std::to_string(i) : image_ids[i];
      for (std::size_t b = b0; b <= b1; ++b) {
        const double xc = boxes[4 * b], yc = boxes[4 * b + 1];
        const double w = boxes[4 * b + 2], h = boxes[4 * b + 3];
        const double x1 = xc - w / 2.0, y1 = yc - h / 2.0;
        const int label = static_cast<int>(labels[b]) - 1;
        if (label < 0 || label >= conv.vocabulary.num_objects() || w < 0 || h < 0) {
          throw AdapterError("image row " + std::to_string(i) + ": bad box record " +
                             std::to_string(b));
        }
        g.objects.push_back({BoundingBox(x1, y1, x1 + w, y1 + h), label, 1.0});
      }
      if (first_rel[i] >= 0) {
        for (auto r = static_cast<std::size_t>(first_rel[i]);
             r <= static_cast<std::size_t>(last_rel[i]); ++r) {
          if (r >= predicates.size()) {
            throw AdapterError("image row " + std::to_string(i) + ": bad relation range");
          }
          const std::int64_t s = relationships[2 * r] - first_box[i];
          const std::int64_t o = relationships[2 * r + 1] - first_box[i];
          const int p = static_cast<int>(predicates[r]) - 1;
          const auto n = static_cast<std::int64_t>(g.objects.size());
          if (s < 0 || o < 0 || s >= n || o >= n || p < 0 ||
              p >= conv.vocabulary.num_predicates()) {
            throw AdapterError("image row " + std::to_string(i) +
                               ": bad relation record " + std::to_string(r));
          }
          if (s == o) continue;
          g.relations.push_back({static_cast<int>(s), static_cast<int>(o), p, 1.0});
        }
      }
      out.Add(std::move(g));
    }
    conv.splits.push_back(std::move(out));
  }
  return conv;
}

}  // namespace internal

#else  // !SGG_HAVE_HDF5

bool HaveHdf5Support() { return false; }

namespace internal {
Conversion ConvertVisualGenomeH5(const AdapterManifest&) {
  throw AdapterError("vg-sgg-h5 conversion needs a build with HDF5");
}
}  // namespace internal

#endif

}  // namespace sgg
