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

#include "core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace fakenight {

void GeometryConfig::validate() const {
  if (crop.side < 1) throw Error(ErrorCode::kInvalidArgument, "crop side must be >= 1");
  if (crop.horizontal_anchor < 0.0 || crop.horizontal_anchor > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "horizontal anchor must lie in [0,1]");
  }
  if (resize.target_side < 1) throw Error(ErrorCode::kInvalidArgument, "target side must be >= 1");
  if (prune.min_side > prune.min_side_occluded) {
    throw Error(ErrorCode::kInvalidArgument, "min_side must not exceed min_side_occluded");
  }
}

nlohmann::json GeometryConfig::to_json() const {
  return {{"crop", {{"side", crop.side}, {"horizontal_anchor", crop.horizontal_anchor}}},
          {"resize", {{"target_side", resize.target_side}}},
          {"prune", {{"min_side", prune.min_side}, {"min_side_occluded", prune.min_side_occluded}}}};
}

CropWindow crop_window(int width, int height, const CropSpec &crop) {
  if (crop.side < 1 || crop.side > std::min(width, height)) {
    throw Error(ErrorCode::kInvariant, "crop side " + std::to_string(crop.side) + " does not fit a " +
                                           std::to_string(width) + "x" + std::to_string(height) + " image");
  }
  CropWindow w;
  w.side = crop.side;
  w.x = static_cast<int>(std::lround(crop.horizontal_anchor * (width - crop.side)));
  w.y = height - crop.side;
  return w;
}

TransformedRecord crop_and_transform(const SourceImageRecord &record, const Image &pixels, const CropSpec &crop) {
  if (record.width != pixels.width() || record.height != pixels.height()) {
    throw Error(ErrorCode::kInvariant, "record '" + record.id + "' dimensions do not match its pixels");
  }
  const CropWindow win = crop_window(pixels.width(), pixels.height(), crop);

  TransformedRecord out;
  out.image = Image(win.side, win.side, pixels.channels());
  for (int y = 0; y < win.side; ++y) {
    for (int x = 0; x < win.side; ++x) {
      for (int c = 0; c < pixels.channels(); ++c) out.image.at(x, y, c) = pixels.at(x + win.x, y + win.y, c);
    }
  }

  out.record = record;
  out.record.width = win.side;
  out.record.height = win.side;
  out.record.boxes.clear();
  for (const auto &b : record.boxes) {
    BoundingBox moved = b;
    moved.x1 -= win.x;
    moved.x2 -= win.x;
    moved.y1 -= win.y;
    moved.y2 -= win.y;
    moved = clamp_box(moved, win.side, win.side);
    if (moved.width() > 0.0 && moved.height() > 0.0) out.record.boxes.push_back(moved);
  }
  return out;
}

std::vector<BoundingBox> rescale_boxes(const std::vector<BoundingBox> &boxes, int input_side, const ResizeSpec &rs) {
  const double s = static_cast<double>(rs.target_side) / input_side;
  std::vector<BoundingBox> out = boxes;
  for (auto &b : out) {
    b.x1 *= s;
    b.y1 *= s;
    b.x2 *= s;
    b.y2 *= s;
    b = clamp_box(b, rs.target_side, rs.target_side);  // absorbs 256.00000000000003
  }
  return out;
}

Image resize_bilinear(const Image &image, int target_width, int target_height) {
  if (target_width < 1 || target_height < 1) throw Error(ErrorCode::kInvalidArgument, "invalid resize target");
  if (image.width() == target_width && image.height() == target_height) return image;

  const int w = image.width();
  const int h = image.height();
  const int ch = image.channels();
  const double sx = static_cast<double>(w) / target_width;
  const double sy = static_cast<double>(h) / target_height;

  Image out(target_width, target_height, ch);
  for (int y = 0; y < target_height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(h - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, h - 1);
    const double wy = fy - y0;
    for (int x = 0; x < target_width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(w - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, w - 1);
      const double wx = fx - x0;
      for (int c = 0; c < ch; ++c) {
        const double top = image.at(x0, y0, c) * (1.0 - wx) + image.at(x1, y0, c) * wx;
        const double bottom = image.at(x0, y1, c) * (1.0 - wx) + image.at(x1, y1, c) * wx;
        const double v = top * (1.0 - wy) + bottom * wy;
        out.at(x, y, c) = static_cast<uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
      }
    }
  }
  return out;
}

RescaledImage rescale(const Image &image, const std::vector<BoundingBox> &boxes, const ResizeSpec &rs) {
  if (image.width() != image.height()) {
    throw Error(ErrorCode::kInvariant, "rescale expects a square image; crop first");
  }
  if (rs.target_side < 1) throw Error(ErrorCode::kInvalidArgument, "target side must be >= 1");
  return {resize_bilinear(image, rs.target_side, rs.target_side), rescale_boxes(boxes, image.width(), rs)};
}

std::vector<BoundingBox> prune_small_boxes(const std::vector<BoundingBox> &boxes, const PruneSpec &spec) {
  std::vector<BoundingBox> out;
  for (const auto &b : boxes) {
    const double smallest = std::min(b.width(), b.height());
    if (smallest < spec.min_side) continue;
    if (b.occluded_or_truncated() && smallest < spec.min_side_occluded) continue;
    out.push_back(b);
  }
  return out;
}

PreparedRecord prepare_record(const SourceImageRecord &record, const Image &pixels, const GeometryConfig &config) {
  config.validate();
  TransformedRecord cropped = crop_and_transform(record, pixels, config.crop);
  RescaledImage scaled = rescale(cropped.image, cropped.record.boxes, config.resize);

  PreparedRecord out;
  out.image = std::move(scaled.image);
  out.record = std::move(cropped.record);
  out.record.width = config.resize.target_side;
  out.record.height = config.resize.target_side;
  out.record.boxes = prune_small_boxes(scaled.boxes, config.prune);
  out.empty = out.record.boxes.empty();
  return out;
}

}  // namespace fakenight
