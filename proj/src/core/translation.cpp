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

#include "core/translation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "core/checksum.hpp"
#include "core/dataset_io.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/process.hpp"

namespace fakenight {

namespace fs = std::filesystem;
using nlohmann::json;

void BuiltinParams::validate() const {
  if (!(gamma >= 1.0 && gamma <= 4.0)) throw Error(ErrorCode::kInvalidArgument, "gamma must lie in [1, 4]");
  for (double g : gains) {
    if (!(g >= 0.0 && g <= 1.5)) throw Error(ErrorCode::kInvalidArgument, "channel gains must lie in [0, 1.5]");
  }
  if (!(sky_darken >= 0.0 && sky_darken <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sky_darken must lie in [0, 1]");
  }
}

json BuiltinParams::to_json() const {
  return {{"gamma", gamma}, {"gains", gains}, {"sky_darken", sky_darken}, {"sky_floor", kSkyFloor}};
}

BuiltinParams BuiltinParams::from_json(const json &j) {
  BuiltinParams p;
  p.gamma = j.value("gamma", p.gamma);
  if (j.contains("gains")) p.gains = j["gains"].get<std::array<double, 3>>();
  p.sky_darken = j.value("sky_darken", p.sky_darken);
  p.validate();
  return p;
}

double BuiltinParams::row_factor(int y, int height) const {
  const double sky_rows = sky_darken * height;
  if (sky_rows <= 0.0 || y >= sky_rows) return 1.0;
  return kSkyFloor + (1.0 - kSkyFloor) * (y / sky_rows);
}

json TranslatorSpec::to_json() const {
  if (kind == TranslatorKind::kExternal) return {{"kind", "external"}, {"command", command}};
  return {{"kind", "builtin_photometric"}, {"parameters", builtin.to_json()}};
}

TranslatorSpec TranslatorSpec::from_json(const json &j) {
  TranslatorSpec s;
  const std::string kind = j.value("kind", std::string("builtin_photometric"));
  if (kind == "builtin_photometric") {
    s.kind = TranslatorKind::kBuiltinPhotometric;
    s.builtin = BuiltinParams::from_json(j.value("parameters", json::object()));
  } else if (kind == "external") {
    s.kind = TranslatorKind::kExternal;
    s.command = j.value("command", std::string());
    if (s.command.empty()) throw Error(ErrorCode::kInvalidArgument, "external translator needs a command");
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown translator kind '" + kind + "'");
  }
  return s;
}

namespace {

uint8_t quantize(double v) { return static_cast<uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

void require_rgb(const Image &image) {
  if (image.channels() != 3) throw Error(ErrorCode::kInvalidArgument, "translator expects an RGB image");
}

}  // namespace

Image builtin_day_to_night(const Image &image, const BuiltinParams &params) {
  require_rgb(image);
  params.validate();
  std::array<double, 256> curve{};
  for (int v = 0; v < 256; ++v) curve[v] = 255.0 * std::pow(v / 255.0, params.gamma);

  Image out(image.width(), image.height(), 3);
  for (int y = 0; y < image.height(); ++y) {
    const double f = params.row_factor(y, image.height());
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = quantize(curve[image.at(x, y, c)] * params.gains[c] * f);
    }
  }
  return out;
}

Image builtin_night_to_day(const Image &image, const BuiltinParams &params) {
  require_rgb(image);
  params.validate();
  Image out(image.width(), image.height(), 3);
  for (int y = 0; y < image.height(); ++y) {
    const double f = params.row_factor(y, image.height());
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const double scale = 255.0 * params.gains[c] * f;
        const double v = scale > 0.0 ? 255.0 * std::pow(image.at(x, y, c) / scale, 1.0 / params.gamma) : 0.0;
        out.at(x, y, c) = quantize(v);
      }
    }
  }
  return out;
}

double cycle_consistency_error(const Image &original, const Image &reconstructed) {
  if (original.width() != reconstructed.width() || original.height() != reconstructed.height() ||
      original.channels() != reconstructed.channels()) {
    throw Error(ErrorCode::kInvalidArgument, "cycle error needs images of identical dimensions");
  }
  const auto a = original.data();
  const auto b = reconstructed.data();
  if (a.empty()) return 0.0;
  uint64_t sum = 0;
  for (size_t i = 0; i < a.size(); ++i) sum += static_cast<uint64_t>(std::abs(int{a[i]} - int{b[i]}));
  return static_cast<double>(sum) / static_cast<double>(a.size());
}

void TranslationManifest::validate() const {
  std::set<std::string> ids, outputs;
  for (const auto &e : entries) {
    if (!ids.insert(e.id).second) throw Error(ErrorCode::kInvariant, "manifest id '" + e.id + "' repeated");
    if (!outputs.insert(e.expected_output_file).second) {
      throw Error(ErrorCode::kInvariant, "manifest output '" + e.expected_output_file + "' repeated");
    }
  }
}

json TranslationManifest::to_json() const {
  json arr = json::array();
  for (const auto &e : entries) {
    arr.push_back({{"id", e.id},
                   {"source_file", e.source_file},
                   {"expected_output_file", e.expected_output_file},
                   {"sha256", e.sha256}});
  }
  return {{"direction", direction == Direction::kDayToNight ? "day_to_night" : "night_to_day"},
          {"source_dir", source_dir},
          {"output_dir", output_dir},
          {"entries", std::move(arr)}};
}

TranslationManifest TranslationManifest::from_json(const json &j) {
  TranslationManifest m;
  try {
    const std::string dir = j.at("direction").get<std::string>();
    if (dir == "day_to_night") {
      m.direction = Direction::kDayToNight;
    } else if (dir == "night_to_day") {
      m.direction = Direction::kNightToDay;
    } else {
      throw Error(ErrorCode::kParse, "unknown manifest direction '" + dir + "'");
    }
    m.source_dir = j.value("source_dir", std::string());
    m.output_dir = j.value("output_dir", std::string());
    for (const auto &je : j.at("entries")) {
      m.entries.push_back({je.at("id").get<std::string>(), je.at("source_file").get<std::string>(),
                           je.at("expected_output_file").get<std::string>(), je.value("sha256", std::string())});
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("malformed manifest: ") + e.what());
  }
  m.validate();
  return m;
}

TranslationManifest make_manifest(const LabeledDataset &ds, const fs::path &output_dir, Direction direction,
                                  int jobs) {
  TranslationManifest m;
  m.direction = direction;
  const fs::path out_abs = fs::absolute(output_dir).lexically_normal();
  m.output_dir = out_abs.string();
  if (!ds.records.empty()) m.source_dir = fs::path(ds.records.front().image_path).parent_path().string();
  m.entries.resize(ds.records.size());
  parallel_for(ds.records.size(), jobs, [&](size_t i) {
    const auto &r = ds.records[i];
    m.entries[i] = {r.id, r.image_path, (out_abs / (r.id + ".png")).string(), sha256_file(r.image_path)};
  });
  m.validate();
  return m;
}

std::vector<std::string> verify_manifest(const TranslationManifest &manifest, const LabeledDataset &ds, int jobs) {
  std::vector<char> bad(manifest.entries.size(), 0);
  parallel_for(manifest.entries.size(), jobs, [&](size_t i) {
    const auto &e = manifest.entries[i];
    const SourceImageRecord *rec = ds.find(e.id);
    if (!fs::exists(e.expected_output_file)) {
      bad[i] = 1;
      return;
    }
    try {
      Image img = load_image(e.expected_output_file);
      if (rec && (img.width() != rec->width || img.height() != rec->height)) bad[i] = 1;
    } catch (const Error &) {
      bad[i] = 1;
    }
  });
  std::vector<std::string> ids;
  for (size_t i = 0; i < bad.size(); ++i) {
    if (bad[i]) ids.push_back(manifest.entries[i].id);
  }
  return ids;
}

namespace {

std::string join_ids(const std::vector<std::string> &ids) {
  std::string s;
  for (const auto &id : ids) {
    if (!s.empty()) s += ", ";
    s += id;
  }
  return s;
}

}  // namespace

TranslationManifest run_external_translation(const LabeledDataset &ds, const TranslatorSpec &spec,
                                             const fs::path &output_dir, int jobs) {
  if (spec.kind != TranslatorKind::kExternal || spec.command.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "external translation needs an external translator command");
  }
  fs::create_directories(output_dir);
  TranslationManifest m = make_manifest(ds, output_dir, Direction::kDayToNight, jobs);
  const fs::path manifest_path = fs::absolute(output_dir) / "manifest.json";
  write_text_file(manifest_path, m.to_json().dump(1) + "\n");

  std::string cmd = spec.command;
  if (auto pos = cmd.find("{manifest}"); pos != std::string::npos) {
    cmd.replace(pos, 10, shell_quote(manifest_path.string()));
  } else {
    cmd = build_command(cmd, {"--manifest", manifest_path.string()});
  }
  const fs::path log = fs::absolute(output_dir) / "translator.log";
  ProcessResult pr = run_shell_command(cmd, log);
  if (pr.exit_code != 0) {
    throw Error(ErrorCode::kProcess, "translator exited with status " + std::to_string(pr.exit_code) +
                                         " (log: " + log.string() + ")");
  }
  auto bad = verify_manifest(m, ds, jobs);
  if (!bad.empty()) {
    throw Error(ErrorCode::kVerification, "translator outputs missing or invalid for ids: " + join_ids(bad));
  }
  return m;
}

TranslationManifest run_builtin_translation(const LabeledDataset &ds, const BuiltinParams &params,
                                            const fs::path &output_dir, int jobs) {
  params.validate();
  fs::create_directories(output_dir);
  TranslationManifest m = make_manifest(ds, output_dir, Direction::kDayToNight, jobs);
  write_text_file(fs::path(output_dir) / "manifest.json", m.to_json().dump(1) + "\n");
  parallel_for(m.entries.size(), jobs, [&](size_t i) {
    const auto &e = m.entries[i];
    save_image(builtin_day_to_night(load_image(e.source_file), params), e.expected_output_file);
  });
  return m;
}

TranslationManifest run_translation(const LabeledDataset &ds, const TranslatorSpec &spec, const fs::path &output_dir,
                                    int jobs) {
  if (spec.kind == TranslatorKind::kExternal) return run_external_translation(ds, spec, output_dir, jobs);
  return run_builtin_translation(ds, spec.builtin, output_dir, jobs);
}

json CycleAudit::to_json() const {
  json rows = json::array();
  for (const auto &[id, err] : per_record) rows.push_back({{"id", id}, {"cycle_error", err}});
  return {{"mean_cycle_error", mean_error}, {"threshold", threshold}, {"passed", passed}, {"records", rows}};
}

CycleAudit audit_builtin(const LabeledDataset &ds, const BuiltinParams &params, size_t sample_size,
                         double threshold, int jobs) {
  CycleAudit audit;
  audit.threshold = threshold;
  const size_t n = std::min(sample_size, ds.records.size());
  audit.per_record.resize(n);
  parallel_for(n, jobs, [&](size_t i) {
    const auto &r = ds.records[i];
    Image src = load_image(r.image_path);
    Image back = builtin_night_to_day(builtin_day_to_night(src, params), params);
    audit.per_record[i] = {r.id, cycle_consistency_error(src, back)};
  });
  if (n > 0) {
    double sum = 0.0;
    for (const auto &p : audit.per_record) sum += p.second;
    audit.mean_error = sum / static_cast<double>(n);
  }
  audit.passed = audit.mean_error <= threshold;
  return audit;
}

FakeDataset assemble_fake_dataset(const LabeledDataset &day_ds, const fs::path &translated_dir,
                                  const TranslatorSpec &spec, const std::string &name) {
  FakeDataset fake;
  fake.base.name = name;
  fake.image_dir = fs::absolute(translated_dir).lexically_normal().string();
  std::vector<std::string> missing;
  for (const auto &rec : day_ds.records) {
    fs::path img;
    for (const char *ext : {".png", ".jpg", ".jpeg"}) {
      fs::path candidate = fs::path(fake.image_dir) / (rec.id + ext);
      if (fs::exists(candidate)) {
        img = candidate;
        break;
      }
    }
    std::optional<std::pair<int, int>> size;
    if (!img.empty()) size = probe_image_size(img);
    if (!size || size->first != rec.width || size->second != rec.height) {
      missing.push_back(rec.id);
      continue;
    }
    SourceImageRecord copy = rec;
    copy.image_path = img.string();
    fake.base.records.push_back(std::move(copy));
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kVerification, "translated images missing or resized for ids: " + join_ids(missing));
  }
  fake.provenance = {{"translator", spec.to_json()}, {"source_dataset", day_ds.name}};
  return fake;
}

}  // namespace fakenight
