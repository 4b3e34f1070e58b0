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

#ifndef FAKENIGHT_CORE_EXPERIMENT_HPP
#define FAKENIGHT_CORE_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/eval.hpp"
#include "core/stats.hpp"
#include "core/types.hpp"

namespace fakenight {

struct DatasetRef {
  std::string name;
  std::filesystem::path path;
};

/// One named training or test composition: an ordered union of datasets.
struct Composition {
  std::string name;
  std::vector<std::string> datasets;
};

struct ExperimentPlan {
  std::string name;  // "<training>@<test>"
  Composition training;
  Composition test;
  std::vector<uint64_t> seeds;
  std::string adapter_command;

  void validate() const;
};

/// Declarative experiment description; relative paths resolve against the
/// directory of the config file.
struct ExperimentConfig {
  std::map<std::string, std::filesystem::path> datasets;
  std::vector<Composition> trainings;
  std::vector<Composition> tests;
  std::vector<uint64_t> seeds;
  std::string adapter_command;
  std::vector<std::string> baselines;
  double iou_threshold = 0.5;
  int parallelism = 1;
  TTestVariant t_test = TTestVariant::kPooled;
  nlohmann::json raw;  // split / translator / geometry stanzas for other subcommands

  static ExperimentConfig load(const std::filesystem::path &path);
  static ExperimentConfig from_json(const nlohmann::json &j, const std::filesystem::path &base_dir);

  /// Cross product trainings x tests, in config order.
  std::vector<ExperimentPlan> plans() const;
};

struct Comparison {
  std::string against;
  TTestResult test;
};

struct RunStatistics {
  std::vector<uint64_t> seeds;  // completed seeds, ascending
  std::vector<double> maps;     // parallel to seeds
  std::optional<RunSummary> summary;
  std::vector<Comparison> comparisons;
  std::vector<std::string> warnings;
};

struct ExperimentResult {
  std::string plan;
  std::string training;
  std::string test;
  std::map<uint64_t, EvalReport> reports;
  std::vector<uint64_t> failed_seeds;
  RunStatistics statistics;
  nlohmann::json provenance = nlohmann::json::object();

  nlohmann::json to_json() const;
  static ExperimentResult from_json(const nlohmann::json &j);
};

nlohmann::json results_to_json(const std::vector<ExperimentResult> &results);
std::vector<ExperimentResult> results_from_json(const nlohmann::json &j);

/// Append-only JSONL; the last record for a key wins on replay.
class Journal {
 public:
  explicit Journal(std::filesystem::path path);

  std::optional<nlohmann::json> find(const std::string &key) const;
  void append(const std::string &key, nlohmann::json entry);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, nlohmann::json> entries_;
};

struct InvocationStats {
  size_t train_invocations = 0;
  size_t infer_invocations = 0;
};

/// Drives the detector adapter for every (training, seed) pair and evaluates
/// each model on every test composition. Resumable through out_dir/journal.jsonl.
class ExperimentRunner {
 public:
  ExperimentRunner(ExperimentConfig config, std::filesystem::path out_dir, int jobs = 1);

  /// Runs every plan, computes statistics and pairwise t-tests, and writes
  /// results/results.json.
  std::vector<ExperimentResult> run_all();

  /// Runs a single plan; comparisons are left empty.
  ExperimentResult run(const ExperimentPlan &plan);

  const InvocationStats &invocations() const { return invocations_; }

 private:
  struct Prepared {
    std::filesystem::path dataset_json;
    std::filesystem::path images_dir;
    LabeledDataset dataset;
    std::string sha256;
  };

  const Prepared &prepare_composition(const Composition &c, const std::string &role);
  bool train(const Composition &training, uint64_t seed, std::filesystem::path &model_dir);
  std::optional<EvalReport> infer_and_evaluate(const ExperimentPlan &plan, uint64_t seed,
                                               const std::filesystem::path &model_dir, std::string &detections_sha);
  void seed_task(const std::vector<ExperimentPlan> &plans, size_t training_index, uint64_t seed);
  ExperimentResult collect(const ExperimentPlan &plan);

  ExperimentConfig config_;
  std::filesystem::path out_dir_;
  int jobs_;
  Journal journal_;
  std::mutex prep_mu_;
  std::map<std::string, Prepared> prepared_;
  std::mutex stats_mu_;
  InvocationStats invocations_;
};

/// Mean/std over completed seeds and t-tests against each configured baseline
/// that shares the test composition.
void compute_statistics(std::vector<ExperimentResult> &results, const std::vector<std::string> &baselines,
                        TTestVariant variant = TTestVariant::kPooled);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_EXPERIMENT_HPP
