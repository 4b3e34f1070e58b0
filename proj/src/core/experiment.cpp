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

#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "core/checksum.hpp"
#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/process.hpp"
#include "core/split.hpp"

namespace fakenight {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentPlan::validate() const {
  if (seeds.empty()) throw Error(ErrorCode::kInvalidArgument, "experiment plan '" + name + "' has no seeds");
  if (std::set<uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error(ErrorCode::kInvalidArgument, "experiment plan '" + name + "' repeats a seed");
  }
  if (training.datasets.empty() || test.datasets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "experiment plan '" + name + "' needs training and test datasets");
  }
  if (adapter_command.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "experiment plan '" + name + "' has no detector adapter command");
  }
}

namespace {

Composition composition_from_json(const json &j) {
  Composition c;
  c.name = j.at("name").get<std::string>();
  c.datasets = j.at("datasets").get<std::vector<std::string>>();
  return c;
}

json composition_to_json(const Composition &c) { return {{"name", c.name}, {"datasets", c.datasets}}; }

json t_value_to_json(double t) {
  if (std::isfinite(t)) return t;
  return t > 0 ? "inf" : "-inf";
}

double t_value_from_json(const json &j) {
  if (j.is_string()) {
    return j.get<std::string>() == "-inf" ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const fs::path &path) {
  return from_json(read_json_file(path), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

ExperimentConfig ExperimentConfig::from_json(const json &j, const fs::path &base_dir) {
  ExperimentConfig c;
  c.raw = j;
  try {
    if (j.contains("datasets")) {
      for (auto it = j["datasets"].begin(); it != j["datasets"].end(); ++it) {
        fs::path p = it.value().get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        c.datasets[it.key()] = fs::absolute(p).lexically_normal();
      }
    }
    for (const auto &t : j.value("trainings", json::array())) c.trainings.push_back(composition_from_json(t));
    for (const auto &t : j.value("tests", json::array())) c.tests.push_back(composition_from_json(t));
    c.seeds = j.value("seeds", std::vector<uint64_t>{});
    if (j.contains("adapter")) c.adapter_command = j["adapter"].value("command", std::string());
    c.baselines = j.value("baselines", std::vector<std::string>{});
    c.iou_threshold = j.value("iou_threshold", 0.5);
    c.parallelism = j.value("parallelism", 1);
    c.t_test = j.value("t_test", std::string("pooled")) == "welch" ? TTestVariant::kWelch : TTestVariant::kPooled;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("malformed experiment config: ") + e.what());
  }
  for (const auto &comp : c.trainings) {
    for (const auto &d : comp.datasets) {
      if (!c.datasets.contains(d)) throw Error(ErrorCode::kInvalidArgument, "unknown dataset reference '" + d + "'");
    }
  }
  for (const auto &comp : c.tests) {
    for (const auto &d : comp.datasets) {
      if (!c.datasets.contains(d)) throw Error(ErrorCode::kInvalidArgument, "unknown dataset reference '" + d + "'");
    }
  }
  return c;
}

std::vector<ExperimentPlan> ExperimentConfig::plans() const {
  std::vector<ExperimentPlan> out;
  for (const auto &tr : trainings) {
    for (const auto &te : tests) {
      out.push_back({tr.name + "@" + te.name, tr, te, seeds, adapter_command});
    }
  }
  return out;
}

json ExperimentResult::to_json() const {
  json runs = json::array();
  for (const auto &[seed, report] : reports) runs.push_back({{"seed", seed}, {"report", report.to_json(false)}});
  json comps = json::array();
  for (const auto &c : statistics.comparisons) {
    comps.push_back({{"against", c.against},
                     {"t", t_value_to_json(c.test.t)},
                     {"df", c.test.df},
                     {"p", c.test.p},
                     {"degenerate_variance", c.test.degenerate_variance}});
  }
  json stats{{"seeds", statistics.seeds}, {"maps", statistics.maps}, {"comparisons", comps},
             {"warnings", statistics.warnings}};
  if (statistics.summary) {
    stats["mean"] = statistics.summary->mean;
    stats["std"] = statistics.summary->stddev;
  } else {
    stats["mean"] = nullptr;
    stats["std"] = nullptr;
  }
  return {{"plan", plan},   {"training", training},         {"test", test},
          {"runs", runs},   {"failed_seeds", failed_seeds}, {"statistics", stats},
          {"provenance", provenance}};
}

ExperimentResult ExperimentResult::from_json(const json &j) {
  ExperimentResult r;
  try {
    r.plan = j.at("plan").get<std::string>();
    r.training = j.at("training").get<std::string>();
    r.test = j.at("test").get<std::string>();
    for (const auto &run : j.at("runs")) r.reports[run.at("seed").get<uint64_t>()] = EvalReport::from_json(run.at("report"));
    r.failed_seeds = j.value("failed_seeds", std::vector<uint64_t>{});
    const auto &s = j.at("statistics");
    r.statistics.seeds = s.at("seeds").get<std::vector<uint64_t>>();
    r.statistics.maps = s.at("maps").get<std::vector<double>>();
    if (!s.at("mean").is_null()) r.statistics.summary = RunSummary{s["mean"].get<double>(), s.at("std").get<double>()};
    for (const auto &c : s.at("comparisons")) {
      TTestResult t;
      t.t = t_value_from_json(c.at("t"));
      t.df = c.at("df").get<double>();
      t.p = c.at("p").get<double>();
      t.degenerate_variance = c.value("degenerate_variance", false);
      r.statistics.comparisons.push_back({c.at("against").get<std::string>(), t});
    }
    r.statistics.warnings = s.value("warnings", std::vector<std::string>{});
    r.provenance = j.value("provenance", json::object());
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("malformed experiment result: ") + e.what());
  }
  return r;
}

json results_to_json(const std::vector<ExperimentResult> &results) {
  json arr = json::array();
  for (const auto &r : results) arr.push_back(r.to_json());
  return {{"results", arr}};
}

std::vector<ExperimentResult> results_from_json(const json &j) {
  std::vector<ExperimentResult> out;
  const json &arr = j.is_array() ? j : j.at("results");
  for (const auto &r : arr) out.push_back(ExperimentResult::from_json(r));
  return out;
}

Journal::Journal(fs::path path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      json j = json::parse(line);
      std::string key = j.at("key").get<std::string>();
      entries_[key] = std::move(j);
    } catch (const json::exception &) {
      // A torn final line from an interrupted writer; the entry is redone.
    }
  }
}

std::optional<json> Journal::find(const std::string &key) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Journal::append(const std::string &key, json entry) {
  std::lock_guard lock(mu_);
  entry["key"] = key;
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to journal " + path_.string());
  out << entry.dump() << '\n';
  out.flush();
  entries_[key] = std::move(entry);
}

ExperimentRunner::ExperimentRunner(ExperimentConfig config, fs::path out_dir, int jobs)
    : config_(std::move(config)),
      out_dir_(fs::absolute(out_dir).lexically_normal()),
      jobs_(std::max(1, jobs)),
      journal_(out_dir_ / "journal.jsonl") {}

const ExperimentRunner::Prepared &ExperimentRunner::prepare_composition(const Composition &c, const std::string &role) {
  std::lock_guard lock(prep_mu_);
  const std::string key = role + "_" + c.name;
  if (auto it = prepared_.find(key); it != prepared_.end()) return it->second;

  std::vector<LabeledDataset> parts;
  for (const auto &ref : c.datasets) {
    auto it = config_.datasets.find(ref);
    if (it == config_.datasets.end()) throw Error(ErrorCode::kInvalidArgument, "unknown dataset reference '" + ref + "'");
    LabeledDataset ds = load_dataset(it->second).dataset;
    ds.name = ref;
    parts.push_back(std::move(ds));
  }
  Prepared p;
  p.dataset = compose_training_set(parts, c.name);
  p.images_dir = out_dir_ / "datasets" / (key + "_images");
  p.dataset_json = out_dir_ / "datasets" / (key + ".json");
  fs::create_directories(p.images_dir);
  for (auto &rec : p.dataset.records) {
    const fs::path src = rec.image_path;
    const fs::path link = p.images_dir / (rec.id + src.extension().string());
    std::error_code ec;
    fs::remove(link, ec);
    fs::create_symlink(src, link, ec);
    if (ec) fs::copy_file(src, link, fs::copy_options::overwrite_existing);
    rec.image_path = link.string();
  }
  save_dataset(p.dataset, p.dataset_json, json{{"provenance", {{"composition", composition_to_json(c)}}}});
  p.sha256 = sha256_file(p.dataset_json);
  return prepared_.emplace(key, std::move(p)).first->second;
}

bool ExperimentRunner::train(const Composition &training, uint64_t seed, fs::path &model_dir) {
  const std::string key = "train/" + training.name + "/" + std::to_string(seed);
  const fs::path seed_dir = out_dir_ / "models" / training.name / ("seed_" + std::to_string(seed));
  model_dir = seed_dir / "model";
  if (auto e = journal_.find(key); e && e->value("status", "") == "completed" && fs::exists(model_dir)) return true;

  const Prepared &prep = prepare_composition(training, "train");
  const fs::path train_json = seed_dir / "train.json";
  save_dataset(shuffled(prep.dataset, seed), train_json);
  fs::create_directories(model_dir);
  const std::string cmd =
      build_command(config_.adapter_command, {"train", "--dataset", train_json.string(), "--images",
                                              prep.images_dir.string(), "--seed", std::to_string(seed), "--model-out",
                                              model_dir.string()});
  {
    std::lock_guard lock(stats_mu_);
    ++invocations_.train_invocations;
  }
  const fs::path log = seed_dir / "train.log";
  ProcessResult pr = run_shell_command(cmd, log);
  if (pr.exit_code != 0) {
    journal_.append(key, {{"status", "failed"}, {"exit_code", pr.exit_code}, {"log", fs::relative(log, out_dir_).string()}});
    return false;
  }
  journal_.append(key, {{"status", "completed"}, {"model_dir", fs::relative(model_dir, out_dir_).string()}});
  return true;
}

std::optional<EvalReport> ExperimentRunner::infer_and_evaluate(const ExperimentPlan &plan, uint64_t seed,
                                                               const fs::path &model_dir, std::string &detections_sha) {
  const std::string key = "eval/" + plan.name + "/" + std::to_string(seed);
  if (auto e = journal_.find(key); e && e->value("status", "") == "completed") {
    detections_sha = e->value("detections_sha256", "");
    return EvalReport::from_json(e->at("report"));
  }

  const Prepared &test = prepare_composition(plan.test, "test");
  const fs::path run_dir = out_dir_ / "runs" / plan.name / ("seed_" + std::to_string(seed));
  const fs::path dets_path = run_dir / "detections.json";
  fs::create_directories(run_dir);
  fs::remove(dets_path);
  const std::string cmd = build_command(config_.adapter_command,
                                        {"infer", "--model", model_dir.string(), "--dataset", test.dataset_json.string(),
                                         "--images", test.images_dir.string(), "--detections-out", dets_path.string()});
  {
    std::lock_guard lock(stats_mu_);
    ++invocations_.infer_invocations;
  }
  const fs::path log = run_dir / "infer.log";
  ProcessResult pr = run_shell_command(cmd, log);
  if (pr.exit_code != 0) {
    journal_.append(key, {{"status", "failed"}, {"exit_code", pr.exit_code}, {"log", fs::relative(log, out_dir_).string()}});
    return std::nullopt;
  }
  try {
    EvalReport report = evaluate(load_detections(dets_path), test.dataset, config_.iou_threshold);
    write_text_file(run_dir / "eval.json", report.to_json().dump(1) + "\n");
    write_text_file(run_dir / "eval.csv", report.to_csv());
    detections_sha = sha256_file(dets_path);
    journal_.append(key, {{"status", "completed"}, {"detections_sha256", detections_sha}, {"report", report.to_json(false)}});
    return report;
  } catch (const Error &e) {
    journal_.append(key, {{"status", "failed"}, {"error", e.what()}});
    return std::nullopt;
  }
}

void ExperimentRunner::seed_task(const std::vector<ExperimentPlan> &plans, size_t training_index, uint64_t seed) {
  const Composition &training = config_.trainings[training_index];
  fs::path model_dir;
  try {
    if (!train(training, seed, model_dir)) return;
  } catch (const Error &e) {
    journal_.append("train/" + training.name + "/" + std::to_string(seed), {{"status", "failed"}, {"error", e.what()}});
    return;
  }
  for (const auto &plan : plans) {
    if (plan.training.name != training.name) continue;
    std::string sha;
    try {
      infer_and_evaluate(plan, seed, model_dir, sha);
    } catch (const Error &e) {
      journal_.append("eval/" + plan.name + "/" + std::to_string(seed), {{"status", "failed"}, {"error", e.what()}});
    }
  }
}

ExperimentResult ExperimentRunner::collect(const ExperimentPlan &plan) {
  ExperimentResult r;
  r.plan = plan.name;
  r.training = plan.training.name;
  r.test = plan.test.name;
  json dets = json::object();
  std::vector<uint64_t> seeds = plan.seeds;
  std::sort(seeds.begin(), seeds.end());
  for (uint64_t seed : seeds) {
    auto e = journal_.find("eval/" + plan.name + "/" + std::to_string(seed));
    if (e && e->value("status", "") == "completed") {
      r.reports[seed] = EvalReport::from_json(e->at("report"));
      dets[std::to_string(seed)] = e->value("detections_sha256", "");
    } else {
      r.failed_seeds.push_back(seed);
    }
  }

  auto dataset_list = [&](const Composition &c) {
    json arr = json::array();
    for (const auto &d : c.datasets) arr.push_back({{"name", d}, {"sha256", sha256_file(config_.datasets.at(d))}});
    return arr;
  };
  r.provenance = {{"training_datasets", dataset_list(plan.training)},
                  {"test_datasets", dataset_list(plan.test)},
                  {"composed_train_sha256", prepare_composition(plan.training, "train").sha256},
                  {"composed_test_sha256", prepare_composition(plan.test, "test").sha256},
                  {"adapter_command", plan.adapter_command},
                  {"seeds", seeds},
                  {"iou_threshold", config_.iou_threshold},
                  {"detections_sha256", dets}};
  if (config_.raw.contains("provenance")) r.provenance["inputs"] = config_.raw["provenance"];
  return r;
}

std::vector<ExperimentResult> ExperimentRunner::run_all() {
  const auto plans = config_.plans();
  if (plans.empty()) throw Error(ErrorCode::kInvalidArgument, "experiment config defines no plans");
  for (const auto &p : plans) p.validate();
  for (const auto &t : config_.trainings) prepare_composition(t, "train");
  for (const auto &t : config_.tests) prepare_composition(t, "test");

  std::vector<std::pair<size_t, uint64_t>> tasks;
  for (size_t i = 0; i < config_.trainings.size(); ++i) {
    for (uint64_t s : config_.seeds) tasks.emplace_back(i, s);
  }
  parallel_for(tasks.size(), jobs_, [&](size_t k) { seed_task(plans, tasks[k].first, tasks[k].second); });

  std::vector<ExperimentResult> results;
  for (const auto &p : plans) results.push_back(collect(p));
  compute_statistics(results, config_.baselines, config_.t_test);
  write_text_file(out_dir_ / "results" / "results.json", results_to_json(results).dump(1) + "\n");
  return results;
}

ExperimentResult ExperimentRunner::run(const ExperimentPlan &plan) {
  plan.validate();
  prepare_composition(plan.training, "train");
  prepare_composition(plan.test, "test");
  parallel_for(plan.seeds.size(), jobs_, [&](size_t k) {
    const uint64_t seed = plan.seeds[k];
    fs::path model_dir;
    try {
      if (!train(plan.training, seed, model_dir)) return;
      std::string sha;
      infer_and_evaluate(plan, seed, model_dir, sha);
    } catch (const Error &e) {
      journal_.append("eval/" + plan.name + "/" + std::to_string(seed), {{"status", "failed"}, {"error", e.what()}});
    }
  });
  std::vector<ExperimentResult> one{collect(plan)};
  compute_statistics(one, {}, config_.t_test);
  return one.front();
}

void compute_statistics(std::vector<ExperimentResult> &results, const std::vector<std::string> &baselines,
                        TTestVariant variant) {
  for (auto &r : results) {
    auto &s = r.statistics;
    s = RunStatistics{};
    for (const auto &[seed, report] : r.reports) {
      s.seeds.push_back(seed);
      s.maps.push_back(report.map);
    }
    const size_t planned = r.reports.size() + r.failed_seeds.size();
    if (!r.failed_seeds.empty()) {
      s.warnings.push_back("incomplete: " + std::to_string(r.reports.size()) + " of " + std::to_string(planned) +
                           " seeds completed");
    }
    if (s.maps.size() >= 2) {
      s.summary = summarize_runs(s.maps);
    } else {
      s.warnings.push_back("fewer than 2 completed seeds; no mean/std");
    }
  }
  for (auto &r : results) {
    for (const auto &b : baselines) {
      if (b == r.training) continue;
      auto it = std::find_if(results.begin(), results.end(),
                             [&](const auto &o) { return o.training == b && o.test == r.test; });
      if (it == results.end()) continue;
      if (r.statistics.maps.size() < 2 || it->statistics.maps.size() < 2) {
        r.statistics.warnings.push_back("t-test against '" + b + "' skipped: fewer than 2 completed seeds");
        continue;
      }
      r.statistics.comparisons.push_back({b, students_t_test(r.statistics.maps, it->statistics.maps, variant)});
    }
  }
}

}  // namespace fakenight
