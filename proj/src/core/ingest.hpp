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

#ifndef FAKENIGHT_CORE_INGEST_HPP
#define FAKENIGHT_CORE_INGEST_HPP

#include <bitset>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/image.hpp"
#include "core/types.hpp"

namespace fakenight {

struct IngestWarnings {
  size_t missing_name = 0;
  size_t missing_image = 0;
  size_t non_car_labels = 0;
  size_t degenerate_boxes = 0;
  size_t duplicate_ids = 0;
};

struct IngestResult {
  LabeledDataset dataset;
  IngestWarnings warnings;
};

/// Reads a BDD-style label array. Only entries whose image exists under
/// `image_root` are kept; non-car labels are dropped; boxes are clamped to the
/// image; records come back sorted by id.
IngestResult parse_label_file(const std::filesystem::path &path, const std::filesystem::path &image_root,
                              const std::string &name = {});

struct FilterCriteria {
  std::bitset<kTimeOfDayCount> time_of_day;
  std::bitset<kWeatherCount> weather;
  std::bitset<kSceneCount> scene;
  size_t min_cars = 0;

  /// Every attribute value allowed, min_cars = 0.
  static FilterCriteria universal();
  /// weather in {clear, partly_cloudy}, scene in {highway, city_street,
  /// residential}, min_cars = 1; time of day restricted when given.
  static FilterCriteria defaults(std::optional<TimeOfDay> time_of_day = std::nullopt);

  bool matches(const SourceImageRecord &r) const;
};

LabeledDataset filter_records(const LabeledDataset &ds, const FilterCriteria &criteria);

struct SuspectThresholds {
  double dark_day = 50.0;
  double bright_night = 150.0;
};

struct SuspectLabel {
  std::string id;
  std::string reason;  // "dark-day", "bright-night" or "decode-failure"
  double mean_luma = 0.0;

  friend bool operator==(const SuspectLabel &, const SuspectLabel &) = default;
};

// Returns std::nullopt when the image cannot be decoded.
using ImageLoader = std::function<std::optional<Image>(const SourceImageRecord &)>;

ImageLoader file_image_loader();

/// Review aid only: never mutates the dataset. Output sorted by id.
std::vector<SuspectLabel> flag_suspect_labels(const LabeledDataset &ds, const ImageLoader &loader,
                                              const SuspectThresholds &thresholds = {}, int jobs = 1);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_INGEST_HPP
