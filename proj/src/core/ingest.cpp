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

#include "core/ingest.hpp"

#include <algorithm>

#include <json.hpp>

#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"

namespace fakenight {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool json_flag(const json &attrs, const char *key) {
  if (!attrs.is_object() || !attrs.contains(key)) return false;
  const auto &v = attrs[key];
  return v.is_boolean() ? v.get<bool>() : false;
}

std::string json_string(const json &obj, const char *key) {
  if (!obj.is_object() || !obj.contains(key) || !obj[key].is_string()) return {};
  return obj[key].get<std::string>();
}

}  // namespace

IngestResult parse_label_file(const fs::path &path, const fs::path &image_root, const std::string &name) {
  const json root = read_json_file(path);
  if (!root.is_array()) {
    throw Error(ErrorCode::kParse, path.string() + ": expected a JSON array of label entries");
  }

  IngestResult result;
  result.dataset.name = name.empty() ? path.stem().string() : name;
  auto &warn = result.warnings;

  for (const auto &entry : root) {
    const std::string file_name = json_string(entry, "name");
    if (file_name.empty()) {
      ++warn.missing_name;
      continue;
    }
    const fs::path image_path = (fs::absolute(image_root) / file_name).lexically_normal();
    if (!fs::exists(image_path)) {
      ++warn.missing_image;
      continue;
    }
    auto size = probe_image_size(image_path);
    if (!size) {
      try {
        Image img = load_image(image_path);
        size = std::pair{img.width(), img.height()};
      } catch (const Error &) {
        ++warn.missing_image;
        continue;
      }
    }

    SourceImageRecord rec;
    rec.id = fs::path(file_name).stem().string();
    rec.width = size->first;
    rec.height = size->second;
    rec.image_path = image_path.string();
    const json attrs = entry.contains("attributes") ? entry["attributes"] : json::object();
    rec.attributes.time_of_day = parse_time_of_day(json_string(attrs, "timeofday"));
    rec.attributes.weather = parse_weather(json_string(attrs, "weather"));
    rec.attributes.scene = parse_scene(json_string(attrs, "scene"));

    if (entry.contains("labels") && entry["labels"].is_array()) {
      for (const auto &label : entry["labels"]) {
        if (!label.contains("box2d")) continue;  // lanes, drivable area
        if (json_string(label, "category") != "car") {
          ++warn.non_car_labels;
          continue;
        }
        const auto &b2 = label["box2d"];
        BoundingBox box;
        try {
          box.x1 = b2.at("x1").get<double>();
          box.y1 = b2.at("y1").get<double>();
          box.x2 = b2.at("x2").get<double>();
          box.y2 = b2.at("y2").get<double>();
        } catch (const json::exception &) {
          ++warn.degenerate_boxes;
          continue;
        }
        const json la = label.contains("attributes") ? label["attributes"] : json::object();
        box.occluded = json_flag(la, "occluded");
        box.truncated = json_flag(la, "truncated");
        box.category = "car";
        box = clamp_box(box, rec.width, rec.height);
        if (!box.valid()) {
          ++warn.degenerate_boxes;
          continue;
        }
        rec.boxes.push_back(box);
      }
    }
    result.dataset.records.push_back(std::move(rec));
  }

  auto &records = result.dataset.records;
  std::stable_sort(records.begin(), records.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
  // Duplicate stems keep the first occurrence in sorted order; the stable sort
  // alone would make this depend on file order, so tie-break on full content.
  auto same_id = [](const auto &a, const auto &b) { return a.id == b.id; };
  for (auto it = records.begin(); it != records.end();) {
    auto end = std::find_if_not(it, records.end(), [&](const auto &r) { return r.id == it->id; });
    if (end - it > 1) {
      std::sort(it, end, [](const auto &a, const auto &b) {
        if (a.image_path != b.image_path) return a.image_path < b.image_path;
        return serialize_boxes(a.boxes) < serialize_boxes(b.boxes);
      });
    }
    it = end;
  }
  const size_t before = records.size();
  records.erase(std::unique(records.begin(), records.end(), same_id), records.end());
  warn.duplicate_ids = before - records.size();
  return result;
}

FilterCriteria FilterCriteria::universal() {
  FilterCriteria c;
  c.time_of_day.set();
  c.weather.set();
  c.scene.set();
  c.min_cars = 0;
  return c;
}

FilterCriteria FilterCriteria::defaults(std::optional<TimeOfDay> time_of_day) {
  FilterCriteria c;
  if (time_of_day) {
    c.time_of_day.set(static_cast<size_t>(*time_of_day));
  } else {
    c.time_of_day.set();
  }
  c.weather.set(static_cast<size_t>(Weather::kClear));
  c.weather.set(static_cast<size_t>(Weather::kPartlyCloudy));
  c.scene.set(static_cast<size_t>(Scene::kHighway));
  c.scene.set(static_cast<size_t>(Scene::kCityStreet));
  c.scene.set(static_cast<size_t>(Scene::kResidential));
  c.min_cars = 1;
  return c;
}

bool FilterCriteria::matches(const SourceImageRecord &r) const {
  size_t cars = std::count_if(r.boxes.begin(), r.boxes.end(), [](const auto &b) { return b.category == "car"; });
  return time_of_day.test(static_cast<size_t>(r.attributes.time_of_day)) &&
         weather.test(static_cast<size_t>(r.attributes.weather)) &&
         scene.test(static_cast<size_t>(r.attributes.scene)) && cars >= min_cars;
}

LabeledDataset filter_records(const LabeledDataset &ds, const FilterCriteria &criteria) {
  LabeledDataset out;
  out.name = ds.name;
  std::copy_if(ds.records.begin(), ds.records.end(), std::back_inserter(out.records),
               [&](const auto &r) { return criteria.matches(r); });
  return out;
}

ImageLoader file_image_loader() {
  return [](const SourceImageRecord &r) -> std::optional<Image> {
    try {
      return load_image(r.image_path);
    } catch (const Error &) {
      return std::nullopt;
    }
  };
}

std::vector<SuspectLabel> flag_suspect_labels(const LabeledDataset &ds, const ImageLoader &loader,
                                              const SuspectThresholds &thresholds, int jobs) {
  std::vector<std::optional<SuspectLabel>> slots(ds.records.size());
  parallel_for(ds.records.size(), jobs, [&](size_t i) {
    const auto &rec = ds.records[i];
    const auto tod = rec.attributes.time_of_day;
    if (tod != TimeOfDay::kDaytime && tod != TimeOfDay::kNight) return;
    auto image = loader(rec);
    if (!image || image->channels() != 3) {
      slots[i] = SuspectLabel{rec.id, "decode-failure", 0.0};
      return;
    }
    const double luma = mean_luma(*image);
    if (tod == TimeOfDay::kDaytime && luma < thresholds.dark_day) {
      slots[i] = SuspectLabel{rec.id, "dark-day", luma};
    } else if (tod == TimeOfDay::kNight && luma > thresholds.bright_night) {
      slots[i] = SuspectLabel{rec.id, "bright-night", luma};
    }
  });
  std::vector<SuspectLabel> out;
  for (auto &s : slots) {
    if (s) out.push_back(std::move(*s));
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
  return out;
}

}  // namespace fakenight
