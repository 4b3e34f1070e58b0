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

#ifndef FAKENIGHT_CORE_TRANSLATION_HPP
#define FAKENIGHT_CORE_TRANSLATION_HPP

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/image.hpp"
#include "core/types.hpp"

namespace fakenight {

/// Photometric day-to-night stand-in:
///   v' = 255 * (v/255)^gamma * gain_c * row_factor(y)
/// where row_factor ramps linearly from kSkyFloor at row 0 to 1 at the
/// bottom of the top `sky_darken` fraction of rows, and is 1 below it.
struct BuiltinParams {
  static constexpr double kSkyFloor = 0.15;

  double gamma = 2.2;
  std::array<double, 3> gains{0.30, 0.35, 0.55};
  double sky_darken = 0.35;

  void validate() const;
  nlohmann::json to_json() const;
  static BuiltinParams from_json(const nlohmann::json &j);

  double row_factor(int y, int height) const;
};

enum class TranslatorKind { kBuiltinPhotometric, kExternal };

struct TranslatorSpec {
  TranslatorKind kind = TranslatorKind::kBuiltinPhotometric;
  BuiltinParams builtin;
  // External adapters are invoked as `<command> --manifest <path>`, or with
  // "{manifest}" substituted when the template contains it.
  std::string command;

  nlohmann::json to_json() const;
  static TranslatorSpec from_json(const nlohmann::json &j);
};

Image builtin_day_to_night(const Image &image, const BuiltinParams &params);

/// Analytic inverse of builtin_day_to_night, ignoring the forward quantization.
Image builtin_night_to_day(const Image &image, const BuiltinParams &params);

/// Mean of |a - b| over every pixel and channel, in 8-bit units.
double cycle_consistency_error(const Image &original, const Image &reconstructed);

enum class Direction { kDayToNight, kNightToDay };

struct ManifestEntry {
  std::string id;
  std::string source_file;
  std::string expected_output_file;
  std::string sha256;
};

struct TranslationManifest {
  Direction direction = Direction::kDayToNight;
  std::string source_dir;
  std::string output_dir;
  std::vector<ManifestEntry> entries;

  /// Ids unique and expected outputs distinct.
  void validate() const;
  nlohmann::json to_json() const;
  static TranslationManifest from_json(const nlohmann::json &j);
};

TranslationManifest make_manifest(const LabeledDataset &ds, const std::filesystem::path &output_dir,
                                  Direction direction = Direction::kDayToNight, int jobs = 1);

/// Ids whose expected output is missing, undecodable or resized.
std::vector<std::string> verify_manifest(const TranslationManifest &manifest, const LabeledDataset &ds, int jobs = 1);

/// Writes the manifest to `output_dir/manifest.json`, runs the adapter once,
/// then verifies every output. Adapter stdout/stderr go to
/// `output_dir/translator.log`.
TranslationManifest run_external_translation(const LabeledDataset &ds, const TranslatorSpec &spec,
                                             const std::filesystem::path &output_dir, int jobs = 1);

/// Same manifest contract, executed in-process with the builtin translator.
TranslationManifest run_builtin_translation(const LabeledDataset &ds, const BuiltinParams &params,
                                            const std::filesystem::path &output_dir, int jobs = 1);

TranslationManifest run_translation(const LabeledDataset &ds, const TranslatorSpec &spec,
                                    const std::filesystem::path &output_dir, int jobs = 1);

struct CycleAudit {
  std::vector<std::pair<std::string, double>> per_record;
  double mean_error = 0.0;
  double threshold = 25.0;
  bool passed = true;

  nlohmann::json to_json() const;
};

/// Builtin forward + analytic inverse on the first `sample_size` records.
CycleAudit audit_builtin(const LabeledDataset &ds, const BuiltinParams &params, size_t sample_size = 16,
                         double threshold = 25.0, int jobs = 1);

struct FakeDataset {
  LabeledDataset base;
  std::string image_dir;
  nlohmann::json provenance;
};

/// Copies every annotation verbatim and points image paths at the translated
/// images in `translated_dir`.
FakeDataset assemble_fake_dataset(const LabeledDataset &day_ds, const std::filesystem::path &translated_dir,
                                  const TranslatorSpec &spec, const std::string &name = "fake_night");

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_TRANSLATION_HPP
