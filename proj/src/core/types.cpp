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

#include "core/types.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "core/error.hpp"

namespace fakenight {
namespace {

template <typename E, size_t N>
E lookup(std::string_view s, const std::array<std::pair<std::string_view, E>, N> &table, E fallback) {
  for (const auto &[name, value] : table) {
    if (name == s) return value;
  }
  return fallback;
}

template <typename E, size_t N>
std::string_view reverse_lookup(E v, const std::array<std::pair<std::string_view, E>, N> &table) {
  for (const auto &[name, value] : table) {
    if (value == v) return name;
  }
  return "undefined";
}

// The first entry for each value is the canonical spelling.
constexpr std::array<std::pair<std::string_view, TimeOfDay>, 6> kTimeOfDayNames{{
    {"daytime", TimeOfDay::kDaytime},
    {"night", TimeOfDay::kNight},
    {"dawn_dusk", TimeOfDay::kDawnDusk},
    {"dawn/dusk", TimeOfDay::kDawnDusk},
    {"undefined", TimeOfDay::kUndefined},
    {"day", TimeOfDay::kDaytime},
}};

constexpr std::array<std::pair<std::string_view, Weather>, 9> kWeatherNames{{
    {"rainy", Weather::kRainy},
    {"snowy", Weather::kSnowy},
    {"clear", Weather::kClear},
    {"overcast", Weather::kOvercast},
    {"partly_cloudy", Weather::kPartlyCloudy},
    {"partly cloudy", Weather::kPartlyCloudy},
    {"foggy", Weather::kFoggy},
    {"undefined", Weather::kUndefined},
    {"partly-cloudy", Weather::kPartlyCloudy},
}};

constexpr std::array<std::pair<std::string_view, Scene>, 11> kSceneNames{{
    {"tunnel", Scene::kTunnel},
    {"residential", Scene::kResidential},
    {"parking_lot", Scene::kParkingLot},
    {"parking lot", Scene::kParkingLot},
    {"city_street", Scene::kCityStreet},
    {"city street", Scene::kCityStreet},
    {"gas_stations", Scene::kGasStations},
    {"gas stations", Scene::kGasStations},
    {"highway", Scene::kHighway},
    {"undefined", Scene::kUndefined},
    {"gas station", Scene::kGasStations},
}};

}  // namespace

TimeOfDay parse_time_of_day(std::string_view s) { return lookup(s, kTimeOfDayNames, TimeOfDay::kUndefined); }
Weather parse_weather(std::string_view s) { return lookup(s, kWeatherNames, Weather::kUndefined); }
Scene parse_scene(std::string_view s) { return lookup(s, kSceneNames, Scene::kUndefined); }

std::string_view to_string(TimeOfDay v) { return reverse_lookup(v, kTimeOfDayNames); }
std::string_view to_string(Weather v) { return reverse_lookup(v, kWeatherNames); }
std::string_view to_string(Scene v) { return reverse_lookup(v, kSceneNames); }

const SourceImageRecord *LabeledDataset::find(std::string_view id) const {
  auto it = std::find_if(records.begin(), records.end(), [&](const auto &r) { return r.id == id; });
  return it == records.end() ? nullptr : &*it;
}

size_t LabeledDataset::box_count() const {
  size_t n = 0;
  for (const auto &r : records) n += r.boxes.size();
  return n;
}

void canonicalize(LabeledDataset &ds) {
  std::stable_sort(ds.records.begin(), ds.records.end(),
                   [](const auto &a, const auto &b) { return a.id < b.id; });
  auto dup = std::adjacent_find(ds.records.begin(), ds.records.end(),
                                [](const auto &a, const auto &b) { return a.id == b.id; });
  if (dup != ds.records.end()) {
    throw Error(ErrorCode::kInvariant, "duplicate record id '" + dup->id + "' in dataset '" + ds.name + "'");
  }
}

BoundingBox clamp_box(const BoundingBox &box, int width, int height) {
  BoundingBox out = box;
  const double w = width;
  const double h = height;
  out.x1 = std::clamp(box.x1, 0.0, w);
  out.x2 = std::clamp(box.x2, 0.0, w);
  out.y1 = std::clamp(box.y1, 0.0, h);
  out.y2 = std::clamp(box.y2, 0.0, h);
  return out;
}

}  // namespace fakenight
