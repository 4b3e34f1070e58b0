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

#include "core/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace fakenight {

namespace fs = std::filesystem;
using nlohmann::json;

double round_coord(double v) {
  double r = std::round(v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

json box_to_json(const BoundingBox &box) {
  return json{{"x1", round_coord(box.x1)},       {"y1", round_coord(box.y1)},
              {"x2", round_coord(box.x2)},       {"y2", round_coord(box.y2)},
              {"occluded", box.occluded},        {"truncated", box.truncated},
              {"category", box.category}};
}

BoundingBox box_from_json(const json &j) {
  BoundingBox b;
  b.x1 = j.at("x1").get<double>();
  b.y1 = j.at("y1").get<double>();
  b.x2 = j.at("x2").get<double>();
  b.y2 = j.at("y2").get<double>();
  b.occluded = j.value("occluded", false);
  b.truncated = j.value("truncated", false);
  b.category = j.value("category", std::string("car"));
  return b;
}

std::string serialize_boxes(const std::vector<BoundingBox> &boxes) {
  json arr = json::array();
  for (const auto &b : boxes) arr.push_back(box_to_json(b));
  return arr.dump();
}

namespace {

std::string relative_path(const std::string &path, const fs::path &base_dir) {
  if (path.empty()) return path;
  fs::path p(path);
  if (base_dir.empty() || !p.is_absolute()) return p.generic_string();
  return fs::proximate(p, fs::absolute(base_dir)).generic_string();
}

std::string absolute_path(const std::string &path, const fs::path &base_dir) {
  if (path.empty()) return path;
  fs::path p(path);
  if (!p.is_absolute()) p = fs::absolute(base_dir) / p;
  return p.lexically_normal().string();
}

}  // namespace

json dataset_to_json(const LabeledDataset &ds, const fs::path &base_dir) {
  json records = json::array();
  for (const auto &r : ds.records) {
    json boxes = json::array();
    for (const auto &b : r.boxes) boxes.push_back(box_to_json(b));
    records.push_back(json{{"id", r.id},
                           {"width", r.width},
                           {"height", r.height},
                           {"attributes",
                            {{"time_of_day", to_string(r.attributes.time_of_day)},
                             {"weather", to_string(r.attributes.weather)},
                             {"scene", to_string(r.attributes.scene)}}},
                           {"image_path", relative_path(r.image_path, base_dir)},
                           {"boxes", std::move(boxes)}});
  }
  return json{{"name", ds.name}, {"records", std::move(records)}};
}

LabeledDataset dataset_from_json(const json &j, const fs::path &base_dir) {
  LabeledDataset ds;
  try {
    ds.name = j.value("name", std::string());
    std::set<std::string> seen;
    for (const auto &jr : j.at("records")) {
      SourceImageRecord r;
      r.id = jr.at("id").get<std::string>();
      if (!seen.insert(r.id).second) throw Error(ErrorCode::kInvariant, "duplicate record id '" + r.id + "'");
      r.width = jr.at("width").get<int>();
      r.height = jr.at("height").get<int>();
      if (jr.contains("attributes")) {
        const auto &a = jr["attributes"];
        r.attributes.time_of_day = parse_time_of_day(a.value("time_of_day", std::string()));
        r.attributes.weather = parse_weather(a.value("weather", std::string()));
        r.attributes.scene = parse_scene(a.value("scene", std::string()));
      }
      r.image_path = absolute_path(jr.value("image_path", std::string()), base_dir);
      for (const auto &jb : jr.at("boxes")) r.boxes.push_back(box_from_json(jb));
      ds.records.push_back(std::move(r));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("malformed dataset: ") + e.what());
  }
  return ds;
}

void save_dataset(const LabeledDataset &ds, const fs::path &path, const json &stanzas) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  json j = dataset_to_json(ds, dir);
  for (auto it = stanzas.begin(); it != stanzas.end(); ++it) j[it.key()] = it.value();
  write_text_file(path, j.dump(1) + "\n");
}

DatasetFile load_dataset(const fs::path &path) {
  json j = read_json_file(path);
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  DatasetFile out;
  out.dataset = dataset_from_json(j, dir);
  for (const char *key : {"geometry", "provenance"}) {
    if (j.contains(key)) out.stanzas[key] = j[key];
  }
  return out;
}

std::string read_text_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

json read_json_file(const fs::path &path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    size_t line = 1, col = 1;
    const size_t stop = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                       ": JSON parse error at offset " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace fakenight
