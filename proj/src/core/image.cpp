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

#include "core/image.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "core/error.hpp"

namespace fakenight {

Image::Image(int width, int height, int channels, uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  if (width < 0 || height < 0 || channels < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid image dimensions");
  }
  data_.assign(static_cast<size_t>(width) * height * channels, fill);
}

Image load_image(const std::filesystem::path &path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (mat.empty()) {
    throw Error(ErrorCode::kIo, "cannot decode image " + path.string());
  }
  Image out(mat.cols, mat.rows, 3);
  for (int y = 0; y < mat.rows; ++y) {
    const auto *row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < mat.cols; ++x) {
      out.at(x, y, 0) = row[x][2];
      out.at(x, y, 1) = row[x][1];
      out.at(x, y, 2) = row[x][0];
    }
  }
  return out;
}

void save_image(const Image &image, const std::filesystem::path &path) {
  if (image.channels() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "only RGB images can be written");
  }
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    auto *row = mat.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      row[x] = cv::Vec3b(image.at(x, y, 2), image.at(x, y, 1), image.at(x, y, 0));
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), mat)) {
    throw Error(ErrorCode::kIo, "cannot write image " + path.string());
  }
}

namespace {

uint32_t be32(const unsigned char *p) {
  return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) | (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

uint16_t be16(const unsigned char *p) { return static_cast<uint16_t>((p[0] << 8) | p[1]); }

std::optional<std::pair<int, int>> probe_png(std::ifstream &in) {
  std::array<unsigned char, 24> hdr{};
  in.seekg(0);
  if (!in.read(reinterpret_cast<char *>(hdr.data()), hdr.size())) return std::nullopt;
  if (std::string(reinterpret_cast<char *>(hdr.data()) + 12, 4) != "IHDR") return std::nullopt;
  return std::pair<int, int>{static_cast<int>(be32(&hdr[16])), static_cast<int>(be32(&hdr[20]))};
}

std::optional<std::pair<int, int>> probe_jpeg(std::ifstream &in) {
  in.seekg(2);
  unsigned char buf[7];
  while (in) {
    int c = in.get();
    if (c != 0xFF) return std::nullopt;
    int marker = in.get();
    while (marker == 0xFF) marker = in.get();
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) continue;
    unsigned char lenbuf[2];
    if (!in.read(reinterpret_cast<char *>(lenbuf), 2)) return std::nullopt;
    uint16_t len = be16(lenbuf);
    if (len < 2) return std::nullopt;
    // SOF0..SOF15 except DHT (C4), JPG (C8), DAC (CC).
    if (marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC) {
      if (!in.read(reinterpret_cast<char *>(buf), 5)) return std::nullopt;
      return std::pair<int, int>{be16(&buf[3]), be16(&buf[1])};
    }
    in.seekg(len - 2, std::ios::cur);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::pair<int, int>> probe_image_size(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  unsigned char magic[8] = {};
  in.read(reinterpret_cast<char *>(magic), 8);
  if (in.gcount() < 3) return std::nullopt;
  static constexpr unsigned char kPng[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (std::equal(std::begin(kPng), std::end(kPng), magic)) return probe_png(in);
  if (magic[0] == 0xFF && magic[1] == 0xD8) return probe_jpeg(in);
  return std::nullopt;
}

double mean_luma(const Image &image) {
  if (image.channels() != 3) throw Error(ErrorCode::kInvalidArgument, "luma needs an RGB image");
  const size_t n = static_cast<size_t>(image.width()) * image.height();
  if (n == 0) return 0.0;
  double sum = 0.0;
  auto px = image.data();
  for (size_t i = 0; i < n; ++i) {
    sum += 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  }
  return sum / static_cast<double>(n);
}

}  // namespace fakenight
