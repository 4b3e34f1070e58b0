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

// Command-line front end over the fakenight C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fakenight/fakenight.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct DatasetDeleter {
  void operator()(fn_dataset *d) const { fn_dataset_free(d); }
};
struct TranslatorDeleter {
  void operator()(fn_translator *t) const { fn_translator_free(t); }
};
struct ReportDeleter {
  void operator()(fn_eval_report *r) const { fn_eval_report_free(r); }
};
struct StringDeleter {
  void operator()(char *s) const { fn_string_free(s); }
};

using DatasetPtr = std::unique_ptr<fn_dataset, DatasetDeleter>;
using TranslatorPtr = std::unique_ptr<fn_translator, TranslatorDeleter>;
using ReportPtr = std::unique_ptr<fn_eval_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

class CliError : public std::runtime_error {
 public:
  CliError(fn_status status, const std::string &what) : std::runtime_error(what), status(status) {}
  fn_status status;
};

void check(fn_status s, const std::string &context) {
  if (s != FN_OK) throw CliError(s, context + ": " + fn_status_string(s) + ": " + fn_last_error());
}

DatasetPtr load(const std::string &path) {
  fn_dataset *d = nullptr;
  check(fn_dataset_load(path.c_str(), &d), "loading " + path);
  return DatasetPtr(d);
}

void write_file(const fs::path &path, const std::string &text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(FN_E_IO, "cannot write " + path.string());
  out << text;
}

struct Globals {
  std::string config;
  std::optional<uint64_t> seed;
  int jobs = 1;
  std::string out = ".";
};

json config_stanza(const Globals &g, const char *key) {
  if (g.config.empty()) return json::object();
  std::ifstream in(g.config);
  if (!in) throw CliError(FN_E_IO, "cannot open config " + g.config);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw CliError(FN_E_PARSE, "config " + g.config + " is not valid JSON");
  return j.value(key, json::object());
}

// Config value for `key` unless `flag` was given on the command line.
template <typename T>
void from_config(const json &j, const char *key, T &dst, const CLI::App *sub, const char *flag) {
  if (sub->count(flag) == 0) dst = j.value(key, dst);
}

uint32_t tod_mask(const std::string &s) {
  if (s == "daytime" || s == "day") return FN_TOD_DAYTIME;
  if (s == "night") return FN_TOD_NIGHT;
  if (s == "dawn_dusk") return FN_TOD_DAWN_DUSK;
  if (s == "any") return FN_TOD_ALL;
  throw CliError(FN_E_INVALID_ARGUMENT, "unknown time of day '" + s + "'");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"fakenight: day/night car-detection dataset and experiment toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "Experiment config file (JSON)");
  app.add_option("--seed", g.seed, "Seed for harness-side randomness");
  app.add_option("--jobs", g.jobs, "Worker threads / concurrent seeds")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");

  // prepare
  auto *prepare = app.add_subcommand("prepare", "Parse labels, filter, crop/rescale/prune into a dataset");
  std::string labels, image_root, name, time_of_day = "any";
  fn_geometry_config geom = fn_geometry_config_default();
  bool keep_empty = false, no_filter = false;
  double dark = 50.0, bright = 150.0;
  prepare->add_option("--labels", labels, "BDD-style label JSON")->required();
  prepare->add_option("--images", image_root, "Directory holding the label file's images")->required();
  prepare->add_option("--name", name, "Dataset name (default: label file stem)");
  prepare->add_option("--time-of-day", time_of_day, "daytime, night, dawn_dusk or any");
  prepare->add_option("--side", geom.crop_side, "Square crop side in pixels");
  prepare->add_option("--anchor", geom.horizontal_anchor, "Horizontal crop anchor in [0,1]");
  prepare->add_option("--target", geom.target_side, "Rescaled side in pixels");
  prepare->add_option("--min-side", geom.min_side, "Minimum box side");
  prepare->add_option("--min-side-occluded", geom.min_side_occluded, "Minimum side for occluded/truncated boxes");
  prepare->add_flag("--keep-empty", keep_empty, "Keep records left without boxes");
  prepare->add_flag("--no-filter", no_filter, "Skip the weather/scene/min-car filter");
  prepare->add_option("--dark-threshold", dark, "Luma below which a daytime label is flagged");
  prepare->add_option("--bright-threshold", bright, "Luma above which a night label is flagged");

  // split
  auto *split = app.add_subcommand("split", "Seeded sampling into day/night train/test subsets");
  std::string day_pool, night_pool;
  fn_split_plan plan = fn_split_plan_default(0);
  split->add_option("--day", day_pool, "Prepared day pool")->required();
  split->add_option("--night", night_pool, "Prepared night pool")->required();
  split->add_option("--day-train", plan.day_train);
  split->add_option("--day-test", plan.day_test);
  split->add_option("--night-train", plan.night_train);
  split->add_option("--night-test", plan.night_test);

  // translate
  auto *translate = app.add_subcommand("translate", "Translate every image of a day dataset");
  std::string translate_ds, translator_kind = "builtin", command;
  fn_builtin_params params = fn_builtin_params_default();
  std::vector<double> gains;
  size_t audit_sample = 16;
  double audit_threshold = 25.0;
  translate->add_option("--dataset", translate_ds, "Day dataset to translate")->required();
  translate->add_option("--translator", translator_kind, "builtin or external");
  translate->add_option("--command", command, "External translator command");
  translate->add_option("--gamma", params.gamma);
  translate->add_option("--gains", gains, "Per-channel gains r g b")->expected(3);
  translate->add_option("--sky-darken", params.sky_darken);
  translate->add_option("--audit-sample", audit_sample, "Records used by the cycle audit");
  translate->add_option("--audit-threshold", audit_threshold, "Accepted mean cycle error (8-bit units)");

  // assemble
  auto *assemble = app.add_subcommand("assemble", "Transfer day annotations onto translated images");
  std::string assemble_ds, translated_dir, fake_name = "fake_night";
  assemble->add_option("--dataset", assemble_ds, "Source day dataset")->required();
  assemble->add_option("--translated", translated_dir, "Directory of translated images")->required();
  assemble->add_option("--name", fake_name);

  // compose
  auto *compose = app.add_subcommand("compose", "Union of datasets with source-prefixed ids");
  std::vector<std::string> compose_parts;
  std::string compose_name = "composed";
  compose->add_option("--dataset", compose_parts, "Dataset file (repeatable, in order)")->required();
  compose->add_option("--name", compose_name);

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "VOC-style AP/mAP of a detections file");
  std::string gt_path, dets_path;
  double iou_threshold = 0.5;
  evaluate->add_option("--dataset", gt_path, "Ground-truth dataset")->required();
  evaluate->add_option("--detections", dets_path, "Detections JSON")->required();
  evaluate->add_option("--iou", iou_threshold, "IoU threshold");

  // experiment
  auto *experiment = app.add_subcommand("experiment", "Run every configured plan through the detector adapter");

  // report
  auto *report = app.add_subcommand("report", "Render SVG/JSON/CSV reports from experiment results");
  std::string results_path;
  report->add_option("--results", results_path, "results.json written by `experiment`")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out = g.out;
    if (*prepare) {
      fn_dataset *raw = nullptr;
      fn_ingest_warnings warn{};
      check(fn_dataset_parse_labels(labels.c_str(), image_root.c_str(), name.c_str(), &raw, &warn), "parsing labels");
      DatasetPtr parsed(raw);
      const std::string ds_name = fn_dataset_name(parsed.get());
      std::cerr << "parsed " << fn_dataset_size(parsed.get()) << " records (skipped: " << warn.missing_name
                << " unnamed, " << warn.missing_image << " without image; dropped " << warn.non_car_labels
                << " non-car labels, " << warn.degenerate_boxes << " degenerate boxes)\n";

      json gj = config_stanza(g, "geometry");
      // Same shape as the geometry stanza of a prepared dataset.
      const json crop = gj.value("crop", json::object());
      const json resize = gj.value("resize", json::object());
      const json prune = gj.value("prune", json::object());
      from_config(crop, "side", geom.crop_side, prepare, "--side");
      from_config(crop, "horizontal_anchor", geom.horizontal_anchor, prepare, "--anchor");
      from_config(resize, "target_side", geom.target_side, prepare, "--target");
      from_config(prune, "min_side", geom.min_side, prepare, "--min-side");
      from_config(prune, "min_side_occluded", geom.min_side_occluded, prepare, "--min-side-occluded");

      fn_filter_criteria criteria = fn_filter_criteria_default(tod_mask(time_of_day));
      if (no_filter) criteria = {tod_mask(time_of_day), FN_WEATHER_ALL, FN_SCENE_ALL, 0};
      fn_dataset *filtered_raw = nullptr;
      check(fn_dataset_filter(parsed.get(), &criteria, &filtered_raw), "filtering");
      DatasetPtr filtered(filtered_raw);

      char *suspects = nullptr;
      check(fn_dataset_flag_suspects(filtered.get(), dark, bright, g.jobs, &suspects), "flagging labels");
      StringPtr suspects_owner(suspects);
      write_file(out / (ds_name + "_suspects.json"), std::string(suspects) + "\n");

      fn_dataset *prepared_raw = nullptr;
      size_t empties = 0;
      const fs::path img_dir = out / (ds_name + "_images");
      check(fn_dataset_prepare(filtered.get(), &geom, img_dir.c_str(), keep_empty, g.jobs, &prepared_raw, &empties),
            "preparing");
      DatasetPtr prepared(prepared_raw);
      const fs::path ds_path = out / (ds_name + ".json");
      check(fn_dataset_save_prepared(prepared.get(), &geom, ds_path.c_str()), "saving");
      std::cout << ds_path.string() << ": " << fn_dataset_size(prepared.get()) << " records, "
                << fn_dataset_box_count(prepared.get()) << " boxes (" << empties << " empty records "
                << (keep_empty ? "kept" : "dropped") << ")\n";
    } else if (*split) {
      json sj = config_stanza(g, "split");
      if (sj.contains("subsets")) {
        const auto &s = sj["subsets"];
        from_config(s, "day_train", plan.day_train, split, "--day-train");
        from_config(s, "day_test", plan.day_test, split, "--day-test");
        from_config(s, "night_train", plan.night_train, split, "--night-train");
        from_config(s, "night_test", plan.night_test, split, "--night-test");
      }
      plan.seed = g.seed.value_or(sj.value("seed", uint64_t{0}));
      auto day = load(day_pool);
      auto night = load(night_pool);
      fn_dataset *parts[4] = {};
      check(fn_split(day.get(), night.get(), &plan, parts), "splitting");
      for (fn_dataset *p : parts) {
        DatasetPtr owned(p);
        const fs::path path = out / (std::string(fn_dataset_name(p)) + ".json");
        check(fn_dataset_save(p, path.c_str()), "saving split");
        std::cout << path.string() << ": " << fn_dataset_size(p) << " records\n";
      }
    } else if (*translate) {
      auto ds = load(translate_ds);
      fn_translator *raw = nullptr;
      json tj = config_stanza(g, "translator");
      if (!tj.empty()) {
        check(fn_translator_from_json(tj.dump().c_str(), &raw), "translator config");
      } else if (translator_kind == "external") {
        check(fn_translator_new_external(command.c_str(), &raw), "external translator");
      } else {
        if (gains.size() == 3) std::copy(gains.begin(), gains.end(), params.gains);
        check(fn_translator_new_builtin(&params, &raw), "builtin translator");
      }
      TranslatorPtr translator(raw);
      check(fn_translate(ds.get(), translator.get(), out.c_str(), g.jobs), "translating");
      char *audit = nullptr;
      if (fn_cycle_audit(ds.get(), translator.get(), audit_sample, audit_threshold, g.jobs, &audit) == FN_OK) {
        StringPtr audit_owner(audit);
        write_file(out / "audit.json", std::string(audit) + "\n");
        std::cout << "cycle audit: " << json::parse(audit).at("mean_cycle_error").get<double>() << "\n";
      }
      std::cout << (out / "manifest.json").string() << ": " << fn_dataset_size(ds.get()) << " images translated\n";
    } else if (*assemble) {
      auto day = load(assemble_ds);
      fn_translator *raw = nullptr;
      json tj = config_stanza(g, "translator");
      if (!tj.empty()) {
        check(fn_translator_from_json(tj.dump().c_str(), &raw), "translator config");
      } else {
        check(fn_translator_new_builtin(nullptr, &raw), "builtin translator");
      }
      TranslatorPtr translator(raw);
      fn_dataset *fake_raw = nullptr;
      check(fn_assemble(day.get(), translated_dir.c_str(), translator.get(), fake_name.c_str(), &fake_raw),
            "assembling");
      DatasetPtr fake(fake_raw);
      const fs::path path = out / (fake_name + ".json");
      check(fn_dataset_save(fake.get(), path.c_str()), "saving");
      std::cout << path.string() << ": " << fn_dataset_size(fake.get()) << " records\n";
    } else if (*compose) {
      std::vector<DatasetPtr> owned;
      std::vector<const fn_dataset *> parts;
      for (const auto &p : compose_parts) {
        owned.push_back(load(p));
        parts.push_back(owned.back().get());
      }
      fn_dataset *raw = nullptr;
      check(fn_compose(parts.data(), parts.size(), compose_name.c_str(), &raw), "composing");
      DatasetPtr composed(raw);
      const fs::path path = out / (compose_name + ".json");
      check(fn_dataset_save(composed.get(), path.c_str()), "saving");
      std::cout << path.string() << ": " << fn_dataset_size(composed.get()) << " records\n";
    } else if (*evaluate) {
      auto gt = load(gt_path);
      fn_eval_report *raw = nullptr;
      check(fn_evaluate(gt.get(), dets_path.c_str(), iou_threshold, &raw), "evaluating");
      ReportPtr rep(raw);
      char *j = nullptr;
      char *csv = nullptr;
      check(fn_eval_report_to_json(rep.get(), &j), "serializing report");
      StringPtr j_owner(j);
      check(fn_eval_report_to_csv(rep.get(), &csv), "serializing report");
      StringPtr csv_owner(csv);
      write_file(out / "eval.json", std::string(j) + "\n");
      write_file(out / "eval.csv", csv);
      size_t tp = 0, fp = 0, fn = 0;
      fn_eval_report_counts(rep.get(), &tp, &fp, &fn);
      std::printf("mAP %.6f (TP %zu, FP %zu, FN %zu)\n", fn_eval_report_map(rep.get()), tp, fp, fn);
    } else if (*experiment) {
      if (g.config.empty()) throw CliError(FN_E_INVALID_ARGUMENT, "experiment needs --config");
      char *results = nullptr;
      check(fn_experiment_run(g.config.c_str(), out.c_str(), g.jobs, &results), "running experiment");
      StringPtr owner(results);
      const fs::path results_file = out / "results" / "results.json";
      check(fn_report_render(results_file.c_str(), (out / "report").c_str()), "rendering report");
      for (const auto &r : json::parse(results).at("results")) {
        const auto &s = r.at("statistics");
        std::cout << r.at("plan").get<std::string>() << ": " << s.at("maps").size() << " seeds";
        if (!s.at("mean").is_null()) std::cout << ", mAP " << s["mean"].get<double>() << " ± " << s["std"].get<double>();
        std::cout << "\n";
      }
    } else if (*report) {
      check(fn_report_render(results_path.c_str(), out.c_str()), "rendering report");
      std::cout << "report written to " << out.string() << "\n";
    }
  } catch (const CliError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 10 + static_cast<int>(e.status);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
