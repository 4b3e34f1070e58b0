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

#ifndef FAKENIGHT_CORE_TYPES_HPP
#define FAKENIGHT_CORE_TYPES_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fakenight {

/// Axis-aligned box in continuous pixel coordinates, origin top-left.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
  bool occluded = false;
  bool truncated = false;
  std::string category = "car";

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() > 0.0 && height() > 0.0 ? width() * height() : 0.0; }
  bool valid() const { return x1 < x2 && y1 < y2; }
  bool occluded_or_truncated() const { return occluded || truncated; }

  friend bool operator==(const BoundingBox &, const BoundingBox &) = default;
};

enum class TimeOfDay { kDaytime, kNight, kDawnDusk, kUndefined };
enum class Weather { kRainy, kSnowy, kClear, kOvercast, kPartlyCloudy, kFoggy, kUndefined };
enum class Scene { kTunnel, kResidential, kParkingLot, kCityStreet, kGasStations, kHighway, kUndefined };

inline constexpr int kTimeOfDayCount = 4;
inline constexpr int kWeatherCount = 7;
inline constexpr int kSceneCount = 7;

struct SceneAttributes {
  TimeOfDay time_of_day = TimeOfDay::kUndefined;
  Weather weather = Weather::kUndefined;
  Scene scene = Scene::kUndefined;

  friend bool operator==(const SceneAttributes &, const SceneAttributes &) = default;
};

// Both the BDD spelling ("partly cloudy", "dawn/dusk") and the canonical
// snake_case spelling parse. Unknown strings map to kUndefined.
TimeOfDay parse_time_of_day(std::string_view s);
Weather parse_weather(std::string_view s);
Scene parse_scene(std::string_view s);

std::string_view to_string(TimeOfDay v);
std::string_view to_string(Weather v);
std::string_view to_string(Scene v);

struct SourceImageRecord {
  std::string id;
  int width = 0;
  int height = 0;
  SceneAttributes attributes;
  std::vector<BoundingBox> boxes;
  // Absolute, lexically normal path while in memory.
  std::string image_path;

  friend bool operator==(const SourceImageRecord &, const SourceImageRecord &) = default;
};

struct LabeledDataset {
  std::string name;
  std::vector<SourceImageRecord> records;

  const SourceImageRecord *find(std::string_view id) const;
  size_t box_count() const;

  friend bool operator==(const LabeledDataset &, const LabeledDataset &) = default;
};

/// Sorts records by id and rejects duplicates.
void canonicalize(LabeledDataset &ds);

/// Clamps a box into [0,width]x[0,height].
BoundingBox clamp_box(const BoundingBox &box, int width, int height);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_TYPES_HPP
