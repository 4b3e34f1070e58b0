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

#include "fakenight/fakenight.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <string>

#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/eval.hpp"
#include "core/experiment.hpp"
#include "core/geometry.hpp"
#include "core/ingest.hpp"
#include "core/parallel.hpp"
#include "core/report.hpp"
#include "core/split.hpp"
#include "core/stats.hpp"
#include "core/translation.hpp"

struct fn_dataset {
  fakenight::LabeledDataset ds;
};

struct fn_translator {
  fakenight::TranslatorSpec spec;
};

struct fn_eval_report {
  fakenight::EvalReport report;
};

namespace {

namespace fs = std::filesystem;
using fakenight::Error;
using fakenight::ErrorCode;

thread_local std::string g_last_error;

fn_status fail(fn_status status, const std::string &msg) {
  g_last_error = msg;
  return status;
}

template <typename Fn>
fn_status guarded(Fn &&fn) {
  g_last_error.clear();
  try {
    fn();
    return FN_OK;
  } catch (const Error &e) {
    return fail(static_cast<fn_status>(e.code()), e.what());
  } catch (const nlohmann::json::exception &e) {
    return fail(FN_E_PARSE, e.what());
  } catch (const fs::filesystem_error &e) {
    return fail(FN_E_IO, e.what());
  } catch (const std::bad_alloc &) {
    return fail(FN_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(FN_E_INTERNAL, e.what());
  } catch (...) {
    return fail(FN_E_INTERNAL, "unknown error");
  }
}

void require(bool cond, const char *what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fakenight::GeometryConfig to_geometry(const fn_geometry_config &c) {
  fakenight::GeometryConfig g;
  g.crop.side = c.crop_side;
  g.crop.horizontal_anchor = c.horizontal_anchor;
  g.resize.target_side = c.target_side;
  g.prune.min_side = c.min_side;
  g.prune.min_side_occluded = c.min_side_occluded;
  g.validate();
  return g;
}

template <size_t N>
std::bitset<N> to_bits(uint32_t mask) {
  return std::bitset<N>(mask & ((1u << N) - 1));
}

}  // namespace

extern "C" {

const char *fn_version(void) { return "0.1.0"; }

const char *fn_last_error(void) { return g_last_error.c_str(); }

const char *fn_status_string(fn_status status) {
  switch (status) {
    case FN_OK: return "ok";
    case FN_E_INVALID_ARGUMENT: return "invalid argument";
    case FN_E_PARSE: return "parse error";
    case FN_E_IO: return "i/o error";
    case FN_E_INVARIANT: return "invariant violation";
    case FN_E_PROCESS: return "process error";
    case FN_E_VERIFICATION: return "verification error";
    case FN_E_UNDEFINED: return "undefined result";
    case FN_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void fn_string_free(char *s) { std::free(s); }

fn_status fn_dataset_parse_labels(const char *label_path, const char *image_root, const char *name, fn_dataset **out,
                                  fn_ingest_warnings *warnings) {
  return guarded([&] {
    require(label_path && image_root && out, "label path, image root and output handle are required");
    auto res = fakenight::parse_label_file(label_path, image_root, name ? name : "");
    if (warnings) {
      *warnings = {res.warnings.missing_name, res.warnings.missing_image, res.warnings.non_car_labels,
                   res.warnings.degenerate_boxes, res.warnings.duplicate_ids};
    }
    *out = new fn_dataset{std::move(res.dataset)};
  });
}

fn_status fn_dataset_load(const char *path, fn_dataset **out) {
  return guarded([&] {
    require(path && out, "path and output handle are required");
    *out = new fn_dataset{fakenight::load_dataset(path).dataset};
  });
}

fn_status fn_dataset_save(const fn_dataset *ds, const char *path) {
  return guarded([&] {
    require(ds && path, "dataset and path are required");
    fakenight::save_dataset(ds->ds, path);
  });
}

fn_status fn_dataset_to_json(const fn_dataset *ds, char **json_out) {
  return guarded([&] {
    require(ds && json_out, "dataset and output are required");
    *json_out = dup_string(fakenight::dataset_to_json(ds->ds, fs::current_path()).dump(1));
  });
}

void fn_dataset_free(fn_dataset *ds) { delete ds; }

size_t fn_dataset_size(const fn_dataset *ds) { return ds ? ds->ds.records.size() : 0; }

size_t fn_dataset_box_count(const fn_dataset *ds) { return ds ? ds->ds.box_count() : 0; }

const char *fn_dataset_name(const fn_dataset *ds) { return ds ? ds->ds.name.c_str() : ""; }

fn_status fn_dataset_set_name(fn_dataset *ds, const char *name) {
  return guarded([&] {
    require(ds && name, "dataset and name are required");
    ds->ds.name = name;
  });
}

fn_filter_criteria fn_filter_criteria_default(uint32_t time_of_day_mask) {
  return {time_of_day_mask, FN_WEATHER_CLEAR | FN_WEATHER_PARTLY_CLOUDY,
          FN_SCENE_HIGHWAY | FN_SCENE_CITY_STREET | FN_SCENE_RESIDENTIAL, 1};
}

fn_status fn_dataset_filter(const fn_dataset *ds, const fn_filter_criteria *criteria, fn_dataset **out) {
  return guarded([&] {
    require(ds && criteria && out, "dataset, criteria and output handle are required");
    fakenight::FilterCriteria c;
    c.time_of_day = to_bits<fakenight::kTimeOfDayCount>(criteria->time_of_day_mask);
    c.weather = to_bits<fakenight::kWeatherCount>(criteria->weather_mask);
    c.scene = to_bits<fakenight::kSceneCount>(criteria->scene_mask);
    c.min_cars = criteria->min_cars;
    *out = new fn_dataset{fakenight::filter_records(ds->ds, c)};
  });
}

fn_status fn_dataset_flag_suspects(const fn_dataset *ds, double dark_day, double bright_night, int jobs,
                                   char **json_out) {
  return guarded([&] {
    require(ds && json_out, "dataset and output are required");
    auto flags = fakenight::flag_suspect_labels(ds->ds, fakenight::file_image_loader(), {dark_day, bright_night}, jobs);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &f : flags) arr.push_back({{"id", f.id}, {"reason", f.reason}, {"mean_luma", f.mean_luma}});
    *json_out = dup_string(arr.dump(1));
  });
}

fn_geometry_config fn_geometry_config_default(void) { return {720, 0.5, 256, 20.0, 30.0}; }

fn_status fn_dataset_prepare(const fn_dataset *ds, const fn_geometry_config *config, const char *image_out_dir,
                             int keep_empty, int jobs, fn_dataset **out, size_t *empty_count) {
  return guarded([&] {
    require(ds && config && image_out_dir && out, "dataset, config, image directory and output are required");
    const auto geometry = to_geometry(*config);
    const fs::path dir = fs::absolute(image_out_dir).lexically_normal();
    fs::create_directories(dir);
    std::vector<fakenight::PreparedRecord> prepared(ds->ds.records.size());
    fakenight::parallel_for(prepared.size(), jobs, [&](size_t i) {
      const auto &rec = ds->ds.records[i];
      auto p = fakenight::prepare_record(rec, fakenight::load_image(rec.image_path), geometry);
      p.record.image_path = (dir / (rec.id + ".png")).string();
      fakenight::save_image(p.image, p.record.image_path);
      p.image = {};
      prepared[i] = std::move(p);
    });
    auto result = std::make_unique<fn_dataset>();
    result->ds.name = ds->ds.name;
    size_t empties = 0;
    for (auto &p : prepared) {
      if (p.empty) ++empties;
      if (p.empty && !keep_empty) continue;
      result->ds.records.push_back(std::move(p.record));
    }
    if (empty_count) *empty_count = empties;
    *out = result.release();
  });
}

fn_status fn_dataset_save_prepared(const fn_dataset *ds, const fn_geometry_config *config, const char *path) {
  return guarded([&] {
    require(ds && config && path, "dataset, config and path are required");
    fakenight::save_dataset(ds->ds, path, {{"geometry", to_geometry(*config).to_json()}});
  });
}

fn_split_plan fn_split_plan_default(uint64_t seed) { return {3000, 3000, 3000, 3000, seed}; }

fn_status fn_split(const fn_dataset *pool_day, const fn_dataset *pool_night, const fn_split_plan *plan,
                   fn_dataset *out[4]) {
  return guarded([&] {
    require(pool_day && pool_night && plan && out, "pools, plan and outputs are required");
    fakenight::SplitPlan p{plan->day_train, plan->day_test, plan->night_train, plan->night_test, plan->seed};
    auto r = fakenight::split_sample(pool_day->ds, pool_night->ds, p);
    out[0] = new fn_dataset{std::move(r.day_train)};
    out[1] = new fn_dataset{std::move(r.day_test)};
    out[2] = new fn_dataset{std::move(r.night_train)};
    out[3] = new fn_dataset{std::move(r.night_test)};
  });
}

fn_status fn_compose(const fn_dataset *const *parts, size_t count, const char *name, fn_dataset **out) {
  return guarded([&] {
    require((parts || count == 0) && name && out, "parts, name and output are required");
    std::vector<fakenight::LabeledDataset> v;
    for (size_t i = 0; i < count; ++i) {
      require(parts[i] != nullptr, "null dataset in composition");
      v.push_back(parts[i]->ds);
    }
    *out = new fn_dataset{fakenight::compose_training_set(v, name)};
  });
}

fn_builtin_params fn_builtin_params_default(void) {
  fakenight::BuiltinParams d;
  return {d.gamma, {d.gains[0], d.gains[1], d.gains[2]}, d.sky_darken};
}

fn_status fn_translator_new_builtin(const fn_builtin_params *params, fn_translator **out) {
  return guarded([&] {
    require(out, "output handle is required");
    fakenight::TranslatorSpec spec;
    if (params) {
      spec.builtin.gamma = params->gamma;
      spec.builtin.gains = {params->gains[0], params->gains[1], params->gains[2]};
      spec.builtin.sky_darken = params->sky_darken;
    }
    spec.builtin.validate();
    *out = new fn_translator{spec};
  });
}

fn_status fn_translator_new_external(const char *command, fn_translator **out) {
  return guarded([&] {
    require(command && *command && out, "command and output handle are required");
    fakenight::TranslatorSpec spec;
    spec.kind = fakenight::TranslatorKind::kExternal;
    spec.command = command;
    *out = new fn_translator{spec};
  });
}

fn_status fn_translator_from_json(const char *json, fn_translator **out) {
  return guarded([&] {
    require(json && out, "json and output handle are required");
    *out = new fn_translator{fakenight::TranslatorSpec::from_json(nlohmann::json::parse(json))};
  });
}

void fn_translator_free(fn_translator *t) { delete t; }

fn_status fn_translate(const fn_dataset *ds, const fn_translator *t, const char *output_dir, int jobs) {
  return guarded([&] {
    require(ds && t && output_dir, "dataset, translator and output directory are required");
    fakenight::run_translation(ds->ds, t->spec, output_dir, jobs);
  });
}

fn_status fn_cycle_audit(const fn_dataset *ds, const fn_translator *t, size_t sample_size, double threshold, int jobs,
                         char **json_out) {
  return guarded([&] {
    require(ds && t && json_out, "dataset, translator and output are required");
    if (t->spec.kind != fakenight::TranslatorKind::kBuiltinPhotometric) {
      throw Error(ErrorCode::kInvalidArgument, "the analytic cycle audit needs the builtin translator");
    }
    auto audit = fakenight::audit_builtin(ds->ds, t->spec.builtin, sample_size, threshold, jobs);
    *json_out = dup_string(audit.to_json().dump(1));
  });
}

fn_status fn_cycle_error_files(const char *original, const char *reconstructed, double *error) {
  return guarded([&] {
    require(original && reconstructed && error, "both image paths and output are required");
    *error = fakenight::cycle_consistency_error(fakenight::load_image(original), fakenight::load_image(reconstructed));
  });
}

fn_status fn_assemble(const fn_dataset *day, const char *translated_dir, const fn_translator *t, const char *name,
                      fn_dataset **out) {
  return guarded([&] {
    require(day && translated_dir && t && out, "dataset, directory, translator and output are required");
    auto fake = fakenight::assemble_fake_dataset(day->ds, translated_dir, t->spec, name ? name : "fake_night");
    *out = new fn_dataset{std::move(fake.base)};
  });
}

double fn_iou(fn_box a, fn_box b) {
  fakenight::BoundingBox ba{a.x1, a.y1, a.x2, a.y2};
  fakenight::BoundingBox bb{b.x1, b.y1, b.x2, b.y2};
  return fakenight::iou(ba, bb);
}

fn_status fn_interpolated_ap(const uint8_t *labels, size_t count, size_t total_gt, double *ap) {
  return guarded([&] {
    require((labels || count == 0) && ap, "labels and output are required");
    std::vector<bool> v(count);
    for (size_t i = 0; i < count; ++i) v[i] = labels[i] != 0;
    *ap = fakenight::interpolated_ap(v, total_gt).ap;
  });
}

fn_status fn_evaluate(const fn_dataset *ground_truth, const char *detections_path, double iou_threshold,
                      fn_eval_report **out) {
  return guarded([&] {
    require(ground_truth && detections_path && out, "ground truth, detections and output are required");
    require(iou_threshold > 0.0 && iou_threshold <= 1.0, "IoU threshold must lie in (0, 1]");
    auto dets = fakenight::load_detections(detections_path);
    *out = new fn_eval_report{fakenight::evaluate(dets, ground_truth->ds, iou_threshold)};
  });
}

double fn_eval_report_map(const fn_eval_report *r) { return r ? r->report.map : 0.0; }

void fn_eval_report_counts(const fn_eval_report *r, size_t *tp, size_t *fp, size_t *fn) {
  if (!r) return;
  if (tp) *tp = r->report.tp;
  if (fp) *fp = r->report.fp;
  if (fn) *fn = r->report.fn;
}

fn_status fn_eval_report_to_json(const fn_eval_report *r, char **json_out) {
  return guarded([&] {
    require(r && json_out, "report and output are required");
    *json_out = dup_string(r->report.to_json().dump(1));
  });
}

fn_status fn_eval_report_to_csv(const fn_eval_report *r, char **csv_out) {
  return guarded([&] {
    require(r && csv_out, "report and output are required");
    *csv_out = dup_string(r->report.to_csv());
  });
}

void fn_eval_report_free(fn_eval_report *r) { delete r; }

fn_status fn_summarize_runs(const double *values, size_t count, double *mean, double *stddev) {
  return guarded([&] {
    require((values || count == 0) && mean && stddev, "values and outputs are required");
    auto s = fakenight::summarize_runs(std::span<const double>(values, count));
    *mean = s.mean;
    *stddev = s.stddev;
  });
}

fn_status fn_t_test(const double *a, size_t na, const double *b, size_t nb, int welch, fn_t_test_result *out) {
  return guarded([&] {
    require((a || na == 0) && (b || nb == 0) && out, "samples and output are required");
    auto r = fakenight::students_t_test(std::span<const double>(a, na), std::span<const double>(b, nb),
                                        welch ? fakenight::TTestVariant::kWelch : fakenight::TTestVariant::kPooled);
    *out = {r.t, r.df, r.p, r.degenerate_variance ? 1 : 0};
  });
}

fn_status fn_experiment_run(const char *config_path, const char *out_dir, int jobs, char **results_json) {
  return guarded([&] {
    require(config_path && out_dir, "config path and output directory are required");
    auto config = fakenight::ExperimentConfig::load(config_path);
    const int workers = jobs > 0 ? jobs : config.parallelism;
    fakenight::ExperimentRunner runner(std::move(config), out_dir, workers);
    auto results = runner.run_all();
    if (results_json) *results_json = dup_string(fakenight::results_to_json(results).dump(1));
  });
}

fn_status fn_report_render(const char *results_path, const char *out_dir) {
  return guarded([&] {
    require(results_path && out_dir, "results path and output directory are required");
    auto results = fakenight::results_from_json(fakenight::read_json_file(results_path));
    fakenight::render_report(results, out_dir);
  });
}

}  // extern "C"
