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

#include <sys/wait.h>

#include <cstdlib>

#include <gtest/gtest.h>

#include "core/dataset_io.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace fakenight {
namespace {

using nlohmann::json;
using testing::TempDir;

int run_cli(const std::string &args, const TempDir &dir) {
  const std::string cmd = std::string(FAKENIGHT_CLI) + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST(CliTest, ExitCodeCarriesTheStatus) {
  TempDir dir("cli_codes");
  EXPECT_EQ(run_cli("evaluate --dataset /nonexistent.json --detections x.json", dir), 10 + 3);
  EXPECT_NE(read_text_file(dir / "stderr.txt").find("/nonexistent.json"), std::string::npos);
  EXPECT_NE(run_cli("", dir), 0);
  EXPECT_NE(run_cli("frobnicate", dir), 0);
}

TEST(CliTest, EvaluateWritesJsonAndCsv) {
  TempDir dir("cli_eval");
  write_text_file(dir / "gt.json", R"({"name": "gt", "records": [{"id": "a", "width": 64, "height": 64,
    "image_path": "a.png", "boxes": [{"x1": 0, "y1": 0, "x2": 10, "y2": 10}, {"x1": 20, "y1": 20, "x2": 30, "y2": 30}]}]})");
  write_text_file(dir / "det.json", R"([{"image_id": "a", "x1": 0, "y1": 0, "x2": 10, "y2": 10, "confidence": 0.9},
    {"image_id": "a", "x1": 40, "y1": 40, "x2": 50, "y2": 50, "confidence": 0.8}])");
  ASSERT_EQ(run_cli("--out " + (dir / "r").string() + " evaluate --dataset " + (dir / "gt.json").string() +
                        " --detections " + (dir / "det.json").string(),
                    dir),
            0)
      << read_text_file(dir / "stderr.txt");
  EXPECT_EQ(read_text_file(dir / "stdout.txt"), "mAP 0.500000 (TP 1, FP 1, FN 1)\n");
  EXPECT_EQ(read_json_file(dir / "r/eval.json")["mAP"], 0.5);
  EXPECT_EQ(read_text_file(dir / "r/eval.csv").substr(0, 5), "class");
}

TEST(CliTest, FlagsOverrideConfigStanzas) {
  TempDir dir("cli_prepare");
  const auto corpus = testing::write_corpus(dir / "raw", 3, false, 4, "d", 320, 180);
  write_text_file(dir / "cfg.json", R"({"geometry": {"crop": {"side": 180}, "resize": {"target_side": 90},
    "prune": {"min_side": 2, "min_side_occluded": 3}}})");
  const std::string common = " prepare --labels " + corpus.labels.string() + " --images " + corpus.image_dir.string() +
                             " --name pool --time-of-day day";
  ASSERT_EQ(run_cli("--config " + (dir / "cfg.json").string() + " --out " + (dir / "a").string() + common, dir), 0)
      << read_text_file(dir / "stderr.txt");
  json a = read_json_file(dir / "a/pool.json");
  EXPECT_EQ(a["geometry"]["crop"]["side"], 180);
  EXPECT_EQ(a["geometry"]["resize"]["target_side"], 90);
  EXPECT_EQ(a["records"][0]["width"], 90);

  ASSERT_EQ(run_cli("--config " + (dir / "cfg.json").string() + " --out " + (dir / "b").string() + common +
                        " --target 60",
                    dir),
            0);
  json b = read_json_file(dir / "b/pool.json");
  EXPECT_EQ(b["geometry"]["resize"]["target_side"], 60);
  EXPECT_EQ(b["geometry"]["crop"]["side"], 180);
}

}  // namespace
}  // namespace fakenight
