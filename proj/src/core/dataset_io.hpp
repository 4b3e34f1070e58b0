// Copyright 2026 The fakenight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAKENIGHT_CORE_DATASET_IO_HPP
#define FAKENIGHT_CORE_DATASET_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "core/types.hpp"

namespace fakenight {

/// Rounds to the 3 decimal places used by every serialized coordinate.
double round_coord(double v);

nlohmann::json box_to_json(const BoundingBox &box);
BoundingBox box_from_json(const nlohmann::json &j);

/// Canonical byte serialization of a box list; used for annotation-transfer
/// identity checks and detection tie-breaking.
std::string serialize_boxes(const std::vector<BoundingBox> &boxes);

/// Canonical dataset object. Image paths are written relative to `base_dir`.
nlohmann::json dataset_to_json(const LabeledDataset &ds, const std::filesystem::path &base_dir);
LabeledDataset dataset_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir);

struct DatasetFile {
  LabeledDataset dataset;
  // Optional "geometry" / "provenance" stanzas carried alongside the records.
  nlohmann::json stanzas = nlohmann::json::object();
};

void save_dataset(const LabeledDataset &ds, const std::filesystem::path &path,
                  const nlohmann::json &stanzas = nlohmann::json::object());
DatasetFile load_dataset(const std::filesystem::path &path);

/// JSON parse with line/column in the error message.
nlohmann::json read_json_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);
std::string read_text_file(const std::filesystem::path &path);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_DATASET_IO_HPP
