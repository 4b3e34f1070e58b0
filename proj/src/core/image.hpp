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

#ifndef FAKENIGHT_CORE_IMAGE_HPP
#define FAKENIGHT_CORE_IMAGE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fakenight {

/// Interleaved 8-bit image, row-major, RGB order when channels == 3.
class Image {
 public:
  Image() = default;
  Image(int width, int height, int channels = 3, uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  bool empty() const { return data_.empty(); }

  uint8_t &at(int x, int y, int c) { return data_[index(x, y, c)]; }
  uint8_t at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<uint8_t> data() { return data_; }
  std::span<const uint8_t> data() const { return data_; }

  friend bool operator==(const Image &, const Image &) = default;

 private:
  size_t index(int x, int y, int c) const {
    return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 3;
  std::vector<uint8_t> data_;
};

/// Decodes PNG or JPEG to 8-bit RGB. Throws Error(kIo) on failure.
Image load_image(const std::filesystem::path &path);

/// Encoding follows the extension (.png, .jpg, .jpeg).
void save_image(const Image &image, const std::filesystem::path &path);

/// Reads width/height from the PNG IHDR or JPEG SOF header without decoding.
std::optional<std::pair<int, int>> probe_image_size(const std::filesystem::path &path);

/// Mean Rec.601 luma over all pixels.
double mean_luma(const Image &image);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_IMAGE_HPP
