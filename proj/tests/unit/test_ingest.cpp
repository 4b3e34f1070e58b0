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

#include <algorithm>
#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/image.hpp"
#include "core/ingest.hpp"
#include "support/temp_dir.hpp"

namespace fakenight {
namespace {

using nlohmann::json;
using testing::TempDir;

json car(double x1, double y1, double x2, double y2, bool occluded = false) {
  return {{"category", "car"},
          {"attributes", {{"occluded", occluded}, {"truncated", false}}},
          {"box2d", {{"x1", x1}, {"y1", y1}, {"x2", x2}, {"y2", y2}}}};
}

json entry(const std::string &name, json labels, const std::string &tod = "daytime",
           const std::string &weather = "clear", const std::string &scene = "city street") {
  return {{"name", name}, {"attributes", {{"weather", weather}, {"scene", scene}, {"timeofday", tod}}},
          {"labels", std::move(labels)}};
}

class IngestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (const char *n : {"a", "b", "c", "d"}) save_image(Image(64, 48, 3, 128), dir / "img" / (std::string(n) + ".png"));
  }
  std::filesystem::path write_labels(const json &j) {
    const auto p = dir / "labels.json";
    std::ofstream(p) << j.dump();
    return p;
  }
  TempDir dir{"ingest"};
};

TEST_F(IngestTest, KeepsOnlyCarBoxes) {
  json labels = json::array({car(1, 1, 10, 10), car(2, 2, 20, 20), car(3, 3, 30, 30)});
  labels.push_back({{"category", "traffic light"}, {"box2d", {{"x1", 0}, {"y1", 0}, {"x2", 5}, {"y2", 5}}}});
  labels.push_back({{"category", "traffic light"}, {"box2d", {{"x1", 1}, {"y1", 1}, {"x2", 6}, {"y2", 6}}}});
  labels.push_back({{"category", "lane"}, {"poly2d", json::array()}});
  auto r = parse_label_file(write_labels(json::array({entry("a.png", labels)})), dir / "img");
  ASSERT_EQ(r.dataset.records.size(), 1u);
  EXPECT_EQ(r.dataset.records[0].boxes.size(), 3u);
  EXPECT_EQ(r.warnings.non_car_labels, 2u);
  EXPECT_EQ(r.dataset.records[0].width, 64);
  EXPECT_EQ(r.dataset.records[0].height, 48);
}

TEST_F(IngestTest, EmptyArrayGivesEmptyDataset) {
  auto r = parse_label_file(write_labels(json::array()), dir / "img", "empty");
  EXPECT_TRUE(r.dataset.records.empty());
  EXPECT_EQ(r.dataset.name, "empty");
}

TEST_F(IngestTest, ClampsOutOfBoundsBoxes) {
  auto r = parse_label_file(write_labels(json::array({entry("a.png", {car(-5, -1, 70, 50)})})), dir / "img");
  const auto &b = r.dataset.records.at(0).boxes.at(0);
  EXPECT_EQ(b.x1, 0.0);
  EXPECT_EQ(b.y1, 0.0);
  EXPECT_EQ(b.x2, 64.0);
  EXPECT_EQ(b.y2, 48.0);
}

TEST_F(IngestTest, DropsBoxesThatDegenerateAfterClamping) {
  auto r = parse_label_file(write_labels(json::array({entry("a.png", {car(70, 1, 80, 10), car(5, 5, 5, 9)})})),
                            dir / "img");
  EXPECT_TRUE(r.dataset.records.at(0).boxes.empty());
  EXPECT_EQ(r.warnings.degenerate_boxes, 2u);
}

TEST_F(IngestTest, SkipsMissingNamesAndImages) {
  json j = json::array({entry("a.png", {car(1, 1, 9, 9)}), entry("missing.png", {car(1, 1, 9, 9)})});
  j.push_back({{"attributes", json::object()}, {"labels", json::array()}});
  auto r = parse_label_file(write_labels(j), dir / "img");
  EXPECT_EQ(r.dataset.records.size(), 1u);
  EXPECT_EQ(r.warnings.missing_name, 1u);
  EXPECT_EQ(r.warnings.missing_image, 1u);
}

TEST_F(IngestTest, MalformedJsonReportsPosition) {
  const auto p = dir / "bad.json";
  std::ofstream(p) << "[\n  {\"name\": \"a.png\",\n  oops}\n]";
  try {
    parse_label_file(p, dir / "img");
    FAIL() << "expected a parse error";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST_F(IngestTest, NonArrayRootIsAParseError) {
  try {
    parse_label_file(write_labels(json::object()), dir / "img");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST_F(IngestTest, UnknownAttributesBecomeUndefined) {
  auto r = parse_label_file(write_labels(json::array({entry("a.png", {}, "twilight", "hail", "moon base")})),
                            dir / "img");
  const auto &a = r.dataset.records.at(0).attributes;
  EXPECT_EQ(a.time_of_day, TimeOfDay::kUndefined);
  EXPECT_EQ(a.weather, Weather::kUndefined);
  EXPECT_EQ(a.scene, Scene::kUndefined);
}

TEST_F(IngestTest, EntryOrderDoesNotMatter) {
  json j = json::array({entry("c.png", {car(1, 1, 9, 9)}), entry("a.png", {car(2, 2, 9, 9)}),
                        entry("d.png", {car(3, 3, 9, 9)}, "night"), entry("b.png", {car(4, 4, 9, 9)})});
  const auto reference = parse_label_file(write_labels(j), dir / "img").dataset;
  EXPECT_EQ(reference.records.front().id, "a");
  EXPECT_EQ(reference.records.back().id, "d");
  std::mt19937 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<json> v(j.begin(), j.end());
    std::shuffle(v.begin(), v.end(), rng);
    EXPECT_EQ(parse_label_file(write_labels(json(v)), dir / "img").dataset, reference);
  }
}

TEST_F(IngestTest, DuplicateStemsAreCollapsed) {
  save_image(Image(64, 48, 3, 1), dir / "img" / "a.jpg");
  json j = json::array({entry("a.png", {car(1, 1, 9, 9)}), entry("a.jpg", {car(2, 2, 9, 9)})});
  auto r = parse_label_file(write_labels(j), dir / "img");
  EXPECT_EQ(r.dataset.records.size(), 1u);
  EXPECT_EQ(r.warnings.duplicate_ids, 1u);
}

TEST_F(IngestTest, SerializeParseIsAFixedPoint) {
  json j = json::array({entry("a.png", {car(1.23456, 1, 9, 9, true)}), entry("b.png", {car(2, 2, 30.5, 40)}, "night")});
  const auto ds = parse_label_file(write_labels(j), dir / "img").dataset;
  save_dataset(ds, dir / "out" / "ds.json");
  const auto once = load_dataset(dir / "out" / "ds.json").dataset;
  save_dataset(once, dir / "out" / "ds2.json");
  const auto twice = load_dataset(dir / "out" / "ds2.json").dataset;
  EXPECT_EQ(once, twice);
  EXPECT_EQ(read_text_file(dir / "out" / "ds.json"), read_text_file(dir / "out" / "ds2.json"));
  EXPECT_EQ(once.records[0].image_path, ds.records[0].image_path);
  EXPECT_DOUBLE_EQ(once.records[0].boxes[0].x1, 1.235);
}

LabeledDataset filter_fixture() {
  LabeledDataset ds{"pool", {}};
  const Weather weathers[] = {Weather::kClear, Weather::kRainy, Weather::kPartlyCloudy, Weather::kOvercast};
  const Scene scenes[] = {Scene::kCityStreet, Scene::kHighway, Scene::kTunnel, Scene::kResidential, Scene::kParkingLot};
  const TimeOfDay tods[] = {TimeOfDay::kDaytime, TimeOfDay::kNight, TimeOfDay::kDawnDusk};
  int i = 0;
  for (auto w : weathers) {
    for (auto s : scenes) {
      for (auto t : tods) {
        SourceImageRecord r;
        r.id = "r" + std::to_string(i);
        r.width = r.height = 100;
        r.attributes = {t, w, s};
        for (int k = 0; k < i % 3; ++k) r.boxes.push_back({1.0 * k, 1, 10.0 + k, 10});
        ds.records.push_back(r);
        ++i;
      }
    }
  }
  return ds;
}

TEST(FilterTest, DefaultCriteriaExcludesRainAndEmptyRecords) {
  const auto ds = filter_fixture();
  const auto c = FilterCriteria::defaults();
  const auto out = filter_records(ds, c);
  ASSERT_FALSE(out.records.empty());
  for (const auto &r : out.records) {
    EXPECT_TRUE(r.attributes.weather == Weather::kClear || r.attributes.weather == Weather::kPartlyCloudy);
    EXPECT_TRUE(r.attributes.scene == Scene::kCityStreet || r.attributes.scene == Scene::kHighway ||
                r.attributes.scene == Scene::kResidential);
    EXPECT_GE(r.boxes.size(), 1u);
  }
  SourceImageRecord rainy{"x", 10, 10, {TimeOfDay::kDaytime, Weather::kRainy, Scene::kHighway}, {{1, 1, 5, 5}}, ""};
  EXPECT_FALSE(c.matches(rainy));
  SourceImageRecord empty{"y", 10, 10, {TimeOfDay::kDaytime, Weather::kClear, Scene::kHighway}, {}, ""};
  EXPECT_FALSE(c.matches(empty));
}

TEST(FilterTest, TimeOfDayRestriction) {
  const auto out = filter_records(filter_fixture(), FilterCriteria::defaults(TimeOfDay::kNight));
  ASSERT_FALSE(out.records.empty());
  for (const auto &r : out.records) EXPECT_EQ(r.attributes.time_of_day, TimeOfDay::kNight);
}

TEST(FilterTest, UniversalIsIdentity) {
  const auto ds = filter_fixture();
  EXPECT_EQ(filter_records(ds, FilterCriteria::universal()), ds);
}

TEST(FilterTest, IdempotentAndShrinking) {
  const auto ds = filter_fixture();
  for (const auto &c : {FilterCriteria::defaults(), FilterCriteria::defaults(TimeOfDay::kDaytime)}) {
    const auto once = filter_records(ds, c);
    EXPECT_EQ(filter_records(once, c), once);
    EXPECT_LE(once.records.size(), ds.records.size());
    // Every excluded record fails the predicate.
    size_t matching = std::count_if(ds.records.begin(), ds.records.end(), [&](const auto &r) { return c.matches(r); });
    EXPECT_EQ(matching, once.records.size());
  }
}

TEST(SuspectTest, ExtremeLumasAreFlagged) {
  LabeledDataset ds{"d", {}};
  auto add = [&](const std::string &id, TimeOfDay t) { ds.records.push_back({id, 8, 8, {t, Weather::kClear, Scene::kHighway}, {}, id}); };
  add("black_day", TimeOfDay::kDaytime);
  add("white_night", TimeOfDay::kNight);
  add("gray_day", TimeOfDay::kDaytime);
  add("gray_night", TimeOfDay::kNight);
  add("broken", TimeOfDay::kDaytime);
  ImageLoader loader = [](const SourceImageRecord &r) -> std::optional<Image> {
    if (r.id == "broken") return std::nullopt;
    if (r.id == "black_day") return Image(8, 8, 3, 0);
    if (r.id == "white_night") return Image(8, 8, 3, 255);
    return Image(8, 8, 3, 128);
  };
  const auto before = ds;
  const auto flags = flag_suspect_labels(ds, loader, {}, 3);
  ASSERT_EQ(flags.size(), 3u);
  EXPECT_EQ(flags[0], (SuspectLabel{"black_day", "dark-day", 0.0}));
  EXPECT_EQ(flags[1], (SuspectLabel{"broken", "decode-failure", 0.0}));
  EXPECT_EQ(flags[2].id, "white_night");
  EXPECT_EQ(flags[2].reason, "bright-night");
  EXPECT_NEAR(flags[2].mean_luma, 255.0, 1e-9);
  EXPECT_EQ(ds, before);
}

TEST(SuspectTest, GrayLumaMatchesFormula) {
  Image img(4, 4);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      img.at(x, y, 0) = 10;
      img.at(x, y, 1) = 200;
      img.at(x, y, 2) = 90;
    }
  }
  EXPECT_NEAR(mean_luma(img), 0.299 * 10 + 0.587 * 200 + 0.114 * 90, 1e-9);
  EXPECT_NEAR(mean_luma(Image(3, 3, 3, 128)), 128.0, 1e-9);
}

TEST(SuspectTest, ThresholdsAreConfigurable) {
  LabeledDataset ds{"d", {{"g", 8, 8, {TimeOfDay::kDaytime, Weather::kClear, Scene::kHighway}, {}, ""}}};
  ImageLoader loader = [](const SourceImageRecord &) -> std::optional<Image> { return Image(8, 8, 3, 128); };
  EXPECT_TRUE(flag_suspect_labels(ds, loader).empty());
  EXPECT_EQ(flag_suspect_labels(ds, loader, {129.0, 150.0}).size(), 1u);
}

TEST(TypesTest, AttributeSpellings) {
  EXPECT_EQ(parse_time_of_day("dawn/dusk"), TimeOfDay::kDawnDusk);
  EXPECT_EQ(parse_time_of_day("dawn_dusk"), TimeOfDay::kDawnDusk);
  EXPECT_EQ(parse_weather("partly cloudy"), Weather::kPartlyCloudy);
  EXPECT_EQ(parse_scene("gas stations"), Scene::kGasStations);
  EXPECT_EQ(parse_scene("city_street"), Scene::kCityStreet);
  EXPECT_EQ(parse_weather(""), Weather::kUndefined);
  for (int i = 0; i < kSceneCount; ++i) {
    const auto s = static_cast<Scene>(i);
    EXPECT_EQ(parse_scene(to_string(s)), s);
  }
  for (int i = 0; i < kWeatherCount; ++i) {
    const auto w = static_cast<Weather>(i);
    EXPECT_EQ(parse_weather(to_string(w)), w);
  }
}

TEST(TypesTest, CanonicalizeRejectsDuplicates) {
  LabeledDataset ds{"d", {{"b", 1, 1, {}, {}, ""}, {"a", 1, 1, {}, {}, ""}}};
  canonicalize(ds);
  EXPECT_EQ(ds.records[0].id, "a");
  ds.records.push_back({"a", 1, 1, {}, {}, ""});
  EXPECT_THROW(canonicalize(ds), Error);
}

}  // namespace
}  // namespace fakenight
