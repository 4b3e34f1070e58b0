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

#include <fstream>

#include <gtest/gtest.h>

#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/experiment.hpp"
#include "core/process.hpp"
#include "support/synthetic.hpp"
#include "support/temp_dir.hpp"

namespace fakenight {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::TempDir;

size_t count_lines(const fs::path &p, const std::string &word) {
  std::ifstream in(p);
  size_t n = 0;
  for (std::string line; std::getline(in, line);) n += line == word;
  return n;
}

class ExperimentTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new TempDir("experiment_data");
    testing::write_prepared_dataset(data_->path(), "day", 6, false, 1, 96);
    testing::write_prepared_dataset(data_->path(), "night", 6, true, 2, 96);
    testing::write_prepared_dataset(data_->path(), "night_test", 5, true, 3, 96);
  }
  static void TearDownTestSuite() { delete data_; }

  json config(const std::string &adapter_flags, std::vector<uint64_t> seeds) const {
    return {{"datasets",
             {{"day", (data_->path() / "day.json").string()},
              {"night", (data_->path() / "night.json").string()},
              {"night_test", (data_->path() / "night_test.json").string()}}},
            {"trainings",
             {{{"name", "day"}, {"datasets", {"day"}}},
              {{"name", "night"}, {"datasets", {"night"}}},
              {{"name", "day_night"}, {"datasets", {"day", "night"}}}}},
            {"tests", {{{"name", "night_test"}, {"datasets", {"night_test"}}}}},
            {"seeds", seeds},
            {"adapter", {{"command", std::string(STUB_DETECTOR) + adapter_flags}}},
            {"baselines", {"day", "day_night"}}};
  }

  static TempDir *data_;
  TempDir out{"experiment_out"};
};

TempDir *ExperimentTest::data_ = nullptr;

TEST_F(ExperimentTest, RunsEveryPlanAndSeed) {
  const auto cfg = ExperimentConfig::from_json(config("", {1, 2, 3}), ".");
  ExperimentRunner runner(cfg, out.path(), 3);
  const auto results = runner.run_all();
  ASSERT_EQ(results.size(), 3u);
  EXPECT_EQ(runner.invocations().train_invocations, 9u);
  EXPECT_EQ(runner.invocations().infer_invocations, 9u);
  for (const auto &r : results) {
    EXPECT_EQ(r.reports.size(), 3u);
    EXPECT_TRUE(r.failed_seeds.empty());
    ASSERT_TRUE(r.statistics.summary);
    EXPECT_EQ(r.statistics.maps.size(), 3u);
    EXPECT_EQ(r.test, "night_test");
    EXPECT_EQ(r.provenance["detections_sha256"].size(), 3u);
    EXPECT_EQ(r.provenance["composed_test_sha256"].get<std::string>().size(), 64u);
  }
  EXPECT_EQ(results[0].plan, "day@night_test");
  // day is compared with day_night only; night with both baselines.
  EXPECT_EQ(results[0].statistics.comparisons.size(), 1u);
  EXPECT_EQ(results[1].statistics.comparisons.size(), 2u);
  EXPECT_EQ(results[2].statistics.comparisons.size(), 1u);
  EXPECT_LT(results[0].statistics.summary->mean, results[1].statistics.summary->mean);
  EXPECT_LT(results[0].statistics.summary->mean, results[2].statistics.summary->mean);

  EXPECT_TRUE(fs::exists(out / "results/results.json"));
  EXPECT_TRUE(fs::exists(out / "runs/night@night_test/seed_2/eval.csv"));
  EXPECT_TRUE(fs::exists(out / "models/day_night/seed_3/train.json"));
  const auto composed = load_dataset(out / "datasets/train_day_night.json").dataset;
  EXPECT_EQ(composed.records.size(), 12u);
  EXPECT_EQ(composed.records.front().id, "day__day_1000");
  EXPECT_EQ(composed.records.back().id, "night__night_1005");
  const auto back = results_from_json(read_json_file(out / "results/results.json"));
  EXPECT_EQ(results_to_json(back), results_to_json(results));
}

TEST_F(ExperimentTest, ResumeSkipsCompletedSeeds) {
  std::vector<uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const fs::path counter = out / "counter.txt";
  json first = config(" --counter " + counter.string() + " --fail-from-seed 5", seeds);
  first["trainings"] = json::array({first["trainings"][1]});
  {
    ExperimentRunner runner(ExperimentConfig::from_json(first, "."), out.path());
    const auto partial = runner.run_all();
    EXPECT_EQ(partial[0].reports.size(), 4u);
    EXPECT_EQ(partial[0].failed_seeds.size(), 6u);
    EXPECT_FALSE(partial[0].statistics.warnings.empty());
  }
  EXPECT_EQ(count_lines(counter, "train"), 10u);
  EXPECT_EQ(count_lines(counter, "infer"), 4u);

  fs::remove(counter);
  json second = config(" --counter " + counter.string(), seeds);
  second["trainings"] = first["trainings"];
  ExperimentRunner resumed(ExperimentConfig::from_json(second, "."), out.path());
  const auto results = resumed.run_all();
  EXPECT_EQ(resumed.invocations().train_invocations, 6u);
  EXPECT_EQ(resumed.invocations().infer_invocations, 6u);
  EXPECT_EQ(count_lines(counter, "train"), 6u);
  EXPECT_EQ(count_lines(counter, "infer"), 6u);
  EXPECT_EQ(results[0].reports.size(), 10u);

  // Same outcome as an uninterrupted run.
  TempDir fresh("experiment_fresh");
  ExperimentRunner uninterrupted(ExperimentConfig::from_json(second, "."), fresh.path());
  EXPECT_EQ(results_to_json(uninterrupted.run_all()).dump(), results_to_json(results).dump());

  // Nothing left to do.
  ExperimentRunner again(ExperimentConfig::from_json(second, "."), out.path());
  again.run_all();
  EXPECT_EQ(again.invocations().train_invocations, 0u);
  EXPECT_EQ(again.invocations().infer_invocations, 0u);
}

TEST_F(ExperimentTest, FailedInferenceIsRecordedNotFatal) {
  json j = config("", {1, 2, 3});
  j["trainings"] = json::array({j["trainings"][0]});
  // Inference with the seed-2 model fails.
  j["adapter"]["command"] =
      "sh -c 'case \"$*\" in \"infer \"*seed_2/model*) exit 9;; esac; exec " + std::string(STUB_DETECTOR) + " \"$@\"' stub";
  ExperimentRunner runner(ExperimentConfig::from_json(j, "."), out.path());
  const auto r = runner.run_all();
  EXPECT_EQ(r[0].reports.size(), 2u);
  EXPECT_EQ(r[0].failed_seeds, std::vector<uint64_t>{2});
  ASSERT_FALSE(r[0].statistics.warnings.empty());
  EXPECT_EQ(r[0].statistics.warnings[0], "incomplete: 2 of 3 seeds completed");
  EXPECT_TRUE(fs::exists(out / "runs/day@night_test/seed_2/infer.log"));
}

TEST_F(ExperimentTest, SinglePlanRun) {
  const auto cfg = ExperimentConfig::from_json(config("", {4, 5}), ".");
  ExperimentRunner runner(cfg, out.path(), 2);
  const auto r = runner.run(cfg.plans()[1]);
  EXPECT_EQ(r.plan, "night@night_test");
  EXPECT_EQ(r.reports.size(), 2u);
  EXPECT_TRUE(r.statistics.comparisons.empty());
}

TEST(ExperimentPlanTest, Validation) {
  ExperimentPlan p{"a@b", {"a", {"x"}}, {"b", {"y"}}, {}, "cmd"};
  EXPECT_THROW(p.validate(), Error);
  p.seeds = {1, 1};
  EXPECT_THROW(p.validate(), Error);
  p.seeds = {1, 2};
  EXPECT_NO_THROW(p.validate());
  p.adapter_command.clear();
  EXPECT_THROW(p.validate(), Error);
}

TEST(ExperimentConfigTest, ResolvesPathsAgainstConfigDirectory) {
  TempDir dir("config");
  write_text_file(dir / "cfg/exp.json", json{{"datasets", {{"day", "../data/day.json"}}},
                                             {"trainings", {{{"name", "day"}, {"datasets", {"day"}}}}},
                                             {"tests", {{{"name", "t"}, {"datasets", {"day"}}}}},
                                             {"seeds", {1, 2}},
                                             {"adapter", {{"command", "x"}}},
                                             {"t_test", "welch"}}
                                            .dump());
  const auto c = ExperimentConfig::load(dir / "cfg/exp.json");
  EXPECT_EQ(c.datasets.at("day"), (fs::absolute(dir.path()) / "data/day.json").lexically_normal());
  EXPECT_EQ(c.t_test, TTestVariant::kWelch);
  ASSERT_EQ(c.plans().size(), 1u);
  EXPECT_EQ(c.plans()[0].name, "day@t");
  EXPECT_THROW(ExperimentConfig::from_json({{"trainings", {{{"name", "a"}, {"datasets", {"nope"}}}}}}, "."), Error);
  EXPECT_THROW(ExperimentConfig::from_json({{"seeds", "many"}}, "."), Error);
}

TEST(JournalTest, LastEntryWinsAndTornLinesAreIgnored) {
  TempDir dir("journal");
  {
    Journal j(dir / "j.jsonl");
    j.append("train/a/1", {{"status", "failed"}});
    j.append("train/a/1", {{"status", "completed"}});
    j.append("eval/a@b/1", {{"status", "completed"}});
  }
  std::ofstream(dir / "j.jsonl", std::ios::app) << "{\"key\": \"eval/a@b/2\", \"sta";
  Journal j(dir / "j.jsonl");
  EXPECT_EQ(j.find("train/a/1")->at("status"), "completed");
  EXPECT_TRUE(j.find("eval/a@b/1"));
  EXPECT_FALSE(j.find("eval/a@b/2"));
}

TEST(StatisticsTest, BaselineComparisonsShareTheTestComposition) {
  auto result = [](const std::string &training, const std::string &test, std::vector<double> maps) {
    ExperimentResult r;
    r.training = training;
    r.test = test;
    r.plan = training + "@" + test;
    for (size_t i = 0; i < maps.size(); ++i) {
      EvalReport e;
      e.map = maps[i];
      r.reports[i + 1] = e;
    }
    return r;
  };
  std::vector<ExperimentResult> rs{result("day", "t1", {1, 2, 3}), result("fake", "t1", {2, 3, 4}),
                                   result("fake", "t2", {5, 6, 7}), result("lonely", "t1", {0.5})};
  compute_statistics(rs, {"day"});
  ASSERT_EQ(rs[1].statistics.comparisons.size(), 1u);
  EXPECT_NEAR(rs[1].statistics.comparisons[0].test.t, 1.224744871391589, 1e-12);
  EXPECT_TRUE(rs[2].statistics.comparisons.empty());
  EXPECT_TRUE(rs[0].statistics.comparisons.empty());
  EXPECT_FALSE(rs[3].statistics.summary);
  EXPECT_EQ(rs[3].statistics.warnings.size(), 2u);
}

TEST(ProcessTest, QuotingAndExitCodes) {
  TempDir dir("process");
  EXPECT_EQ(shell_quote("it's"), "'it'\\''s'");
  const auto cmd = build_command("printf '%s|'", {"a b", "c'd", "$HOME"});
  EXPECT_EQ(run_shell_command(cmd, dir / "log.txt").exit_code, 0);
  EXPECT_EQ(read_text_file(dir / "log.txt"), "a b|c'd|$HOME|");
  EXPECT_EQ(run_shell_command("echo err >&2; exit 3", dir / "log2.txt").exit_code, 3);
  EXPECT_EQ(read_text_file(dir / "log2.txt"), "err\n");
  EXPECT_EQ(run_shell_command("kill -9 $$", dir / "log3.txt").exit_code, 128 + 9);
}

}  // namespace
}  // namespace fakenight
