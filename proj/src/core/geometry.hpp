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

#ifndef FAKENIGHT_CORE_GEOMETRY_HPP
#define FAKENIGHT_CORE_GEOMETRY_HPP

#include <vector>

#include <json.hpp>

#include "core/image.hpp"
#include "core/types.hpp"

namespace fakenight {

struct CropSpec {
  int side = 720;
  // Fraction of the admissible x-offset range: 0 left, 0.5 centred, 1 right.
  double horizontal_anchor = 0.5;
};

struct ResizeSpec {
  int target_side = 256;
};

struct PruneSpec {
  double min_side = 20.0;
  double min_side_occluded = 30.0;
};

struct GeometryConfig {
  CropSpec crop;
  ResizeSpec resize;
  PruneSpec prune;

  void validate() const;
  nlohmann::json to_json() const;
};

struct CropWindow {
  int x = 0;
  int y = 0;
  int side = 0;
};

/// Bottom-aligned square window, x = round(anchor * (width - side)).
CropWindow crop_window(int width, int height, const CropSpec &crop);

struct TransformedRecord {
  Image image;
  SourceImageRecord record;
};

TransformedRecord crop_and_transform(const SourceImageRecord &record, const Image &pixels, const CropSpec &crop);

/// Scales the box coordinates of a square image of side `input_side`.
std::vector<BoundingBox> rescale_boxes(const std::vector<BoundingBox> &boxes, int input_side, const ResizeSpec &rs);

/// Bilinear resampling with pixel-centre alignment.
Image resize_bilinear(const Image &image, int target_width, int target_height);

struct RescaledImage {
  Image image;
  std::vector<BoundingBox> boxes;
};

RescaledImage rescale(const Image &image, const std::vector<BoundingBox> &boxes, const ResizeSpec &rs);

std::vector<BoundingBox> prune_small_boxes(const std::vector<BoundingBox> &boxes, const PruneSpec &spec);

struct PreparedRecord {
  Image image;
  SourceImageRecord record;
  bool empty = false;
};

/// crop -> rescale -> prune.
PreparedRecord prepare_record(const SourceImageRecord &record, const Image &pixels, const GeometryConfig &config);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_GEOMETRY_HPP
