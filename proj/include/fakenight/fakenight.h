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

#ifndef FAKENIGHT_FAKENIGHT_H
#define FAKENIGHT_FAKENIGHT_H

/*
 * C interface to the fakenight toolkit: day/night car-detection dataset
 * preparation, fake-night dataset generation, VOC-style evaluation and the
 * multi-seed experiment harness.
 *
 * Every fallible call returns fn_status. On failure a thread-local message is
 * available from fn_last_error() until the next call on the same thread.
 * Handles are opaque; free them with the matching *_free function. Strings
 * returned through char** are owned by the caller and released with
 * fn_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FAKENIGHT_BUILDING_LIBRARY)
#define FN_API __declspec(dllexport)
#else
#define FN_API __declspec(dllimport)
#endif
#else
#define FN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fn_status {
  FN_OK = 0,
  FN_E_INVALID_ARGUMENT = 1,
  FN_E_PARSE = 2,
  FN_E_IO = 3,
  FN_E_INVARIANT = 4,
  FN_E_PROCESS = 5,
  FN_E_VERIFICATION = 6,
  FN_E_UNDEFINED = 7,
  FN_E_INTERNAL = 8
} fn_status;

typedef struct fn_dataset fn_dataset;
typedef struct fn_translator fn_translator;
typedef struct fn_eval_report fn_eval_report;

FN_API const char *fn_version(void);
FN_API const char *fn_last_error(void);
FN_API const char *fn_status_string(fn_status status);
FN_API void fn_string_free(char *s);

/* ---- datasets ----------------------------------------------------------- */

typedef struct fn_ingest_warnings {
  size_t missing_name;
  size_t missing_image;
  size_t non_car_labels;
  size_t degenerate_boxes;
  size_t duplicate_ids;
} fn_ingest_warnings;

/* BDD-style label array -> dataset (cars only, clamped boxes, sorted ids). */
FN_API fn_status fn_dataset_parse_labels(const char *label_path, const char *image_root, const char *name,
                                         fn_dataset **out, fn_ingest_warnings *warnings);
/* Canonical dataset JSON. */
FN_API fn_status fn_dataset_load(const char *path, fn_dataset **out);
FN_API fn_status fn_dataset_save(const fn_dataset *ds, const char *path);
FN_API fn_status fn_dataset_to_json(const fn_dataset *ds, char **json_out);
FN_API void fn_dataset_free(fn_dataset *ds);
FN_API size_t fn_dataset_size(const fn_dataset *ds);
FN_API size_t fn_dataset_box_count(const fn_dataset *ds);
FN_API const char *fn_dataset_name(const fn_dataset *ds);
FN_API fn_status fn_dataset_set_name(fn_dataset *ds, const char *name);

/* Attribute bit masks: bit i enables enum value i. */
enum {
  FN_TOD_DAYTIME = 1u << 0,
  FN_TOD_NIGHT = 1u << 1,
  FN_TOD_DAWN_DUSK = 1u << 2,
  FN_TOD_UNDEFINED = 1u << 3,
  FN_TOD_ALL = 0xFu,

  FN_WEATHER_RAINY = 1u << 0,
  FN_WEATHER_SNOWY = 1u << 1,
  FN_WEATHER_CLEAR = 1u << 2,
  FN_WEATHER_OVERCAST = 1u << 3,
  FN_WEATHER_PARTLY_CLOUDY = 1u << 4,
  FN_WEATHER_FOGGY = 1u << 5,
  FN_WEATHER_UNDEFINED = 1u << 6,
  FN_WEATHER_ALL = 0x7Fu,

  FN_SCENE_TUNNEL = 1u << 0,
  FN_SCENE_RESIDENTIAL = 1u << 1,
  FN_SCENE_PARKING_LOT = 1u << 2,
  FN_SCENE_CITY_STREET = 1u << 3,
  FN_SCENE_GAS_STATIONS = 1u << 4,
  FN_SCENE_HIGHWAY = 1u << 5,
  FN_SCENE_UNDEFINED = 1u << 6,
  FN_SCENE_ALL = 0x7Fu
};

typedef struct fn_filter_criteria {
  uint32_t time_of_day_mask;
  uint32_t weather_mask;
  uint32_t scene_mask;
  size_t min_cars;
} fn_filter_criteria;

/* clear/partly cloudy, highway/city street/residential, >= 1 car. */
FN_API fn_filter_criteria fn_filter_criteria_default(uint32_t time_of_day_mask);
FN_API fn_status fn_dataset_filter(const fn_dataset *ds, const fn_filter_criteria *criteria, fn_dataset **out);

/* Luma review list as a JSON array of {id, reason, mean_luma}. */
FN_API fn_status fn_dataset_flag_suspects(const fn_dataset *ds, double dark_day, double bright_night, int jobs,
                                          char **json_out);

/* ---- geometry ----------------------------------------------------------- */

typedef struct fn_geometry_config {
  int crop_side;
  double horizontal_anchor;
  int target_side;
  double min_side;
  double min_side_occluded;
} fn_geometry_config;

/* 720 square, centred, 256 target, 20/30 px pruning. */
FN_API fn_geometry_config fn_geometry_config_default(void);

/* crop -> rescale -> prune for every record; images written as
 * image_out_dir/<id>.png. Records left without boxes are dropped unless
 * keep_empty is nonzero; *empty_count receives their number. */
FN_API fn_status fn_dataset_prepare(const fn_dataset *ds, const fn_geometry_config *config, const char *image_out_dir,
                                    int keep_empty, int jobs, fn_dataset **out, size_t *empty_count);
/* Saves with the geometry stanza recording `config`. */
FN_API fn_status fn_dataset_save_prepared(const fn_dataset *ds, const fn_geometry_config *config, const char *path);

/* ---- splitting and composition ----------------------------------------- */

typedef struct fn_split_plan {
  size_t day_train;
  size_t day_test;
  size_t night_train;
  size_t night_test;
  uint64_t seed;
} fn_split_plan;

FN_API fn_split_plan fn_split_plan_default(uint64_t seed);
/* out[0..3] = day_train, day_test, night_train, night_test. */
FN_API fn_status fn_split(const fn_dataset *pool_day, const fn_dataset *pool_night, const fn_split_plan *plan,
                          fn_dataset *out[4]);
/* Ordered union; ids become "<dataset name>__<id>". */
FN_API fn_status fn_compose(const fn_dataset *const *parts, size_t count, const char *name, fn_dataset **out);

/* ---- translation -------------------------------------------------------- */

typedef struct fn_builtin_params {
  double gamma;
  double gains[3];
  double sky_darken;
} fn_builtin_params;

FN_API fn_builtin_params fn_builtin_params_default(void);
FN_API fn_status fn_translator_new_builtin(const fn_builtin_params *params, fn_translator **out);
/* Invoked as `<command> --manifest <path>` ("{manifest}" is substituted when present). */
FN_API fn_status fn_translator_new_external(const char *command, fn_translator **out);
FN_API fn_status fn_translator_from_json(const char *json, fn_translator **out);
FN_API void fn_translator_free(fn_translator *t);

/* Writes output_dir/manifest.json plus one translated image per record. */
FN_API fn_status fn_translate(const fn_dataset *ds, const fn_translator *t, const char *output_dir, int jobs);
/* Builtin forward + analytic inverse over the first sample_size records;
 * audit JSON {mean_cycle_error, threshold, passed, records}. */
FN_API fn_status fn_cycle_audit(const fn_dataset *ds, const fn_translator *t, size_t sample_size, double threshold,
                                int jobs, char **json_out);
FN_API fn_status fn_cycle_error_files(const char *original, const char *reconstructed, double *error);
/* Verbatim annotation transfer onto translated_dir/<id>.png. */
FN_API fn_status fn_assemble(const fn_dataset *day, const char *translated_dir, const fn_translator *t,
                             const char *name, fn_dataset **out);

/* ---- evaluation --------------------------------------------------------- */

typedef struct fn_box {
  double x1, y1, x2, y2;
} fn_box;

FN_API double fn_iou(fn_box a, fn_box b);
/* labels[i] != 0 marks a true positive, in descending-confidence order. */
FN_API fn_status fn_interpolated_ap(const uint8_t *labels, size_t count, size_t total_gt, double *ap);
FN_API fn_status fn_evaluate(const fn_dataset *ground_truth, const char *detections_path, double iou_threshold,
                             fn_eval_report **out);
FN_API double fn_eval_report_map(const fn_eval_report *r);
FN_API void fn_eval_report_counts(const fn_eval_report *r, size_t *tp, size_t *fp, size_t *fn);
FN_API fn_status fn_eval_report_to_json(const fn_eval_report *r, char **json_out);
FN_API fn_status fn_eval_report_to_csv(const fn_eval_report *r, char **csv_out);
FN_API void fn_eval_report_free(fn_eval_report *r);

/* ---- statistics --------------------------------------------------------- */

FN_API fn_status fn_summarize_runs(const double *values, size_t count, double *mean, double *stddev);

typedef struct fn_t_test_result {
  double t;
  double df;
  double p;
  int degenerate_variance;
} fn_t_test_result;

/* welch == 0: pooled-variance Student test. */
FN_API fn_status fn_t_test(const double *a, size_t na, const double *b, size_t nb, int welch, fn_t_test_result *out);

/* ---- experiments -------------------------------------------------------- */

/* Runs every (training, test) plan of the config file; resumable. Writes
 * out_dir/results/results.json; *results_json receives the same document. */
FN_API fn_status fn_experiment_run(const char *config_path, const char *out_dir, int jobs, char **results_json);
/* Renders one SVG per test composition plus summary.json/summary.csv. */
FN_API fn_status fn_report_render(const char *results_path, const char *out_dir);

#ifdef __cplusplus
}
#endif

#endif /* FAKENIGHT_FAKENIGHT_H */
