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

#ifndef FAKENIGHT_CORE_EVAL_HPP
#define FAKENIGHT_CORE_EVAL_HPP

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/types.hpp"

namespace fakenight {

struct Detection {
  std::string image_id;
  BoundingBox box;
  double confidence = 0.0;

  friend bool operator==(const Detection &, const Detection &) = default;
};

/// area(a ∩ b) / area(a ∪ b) on continuous coordinates; 0 when the union is empty.
double iou(const BoundingBox &a, const BoundingBox &b);

using GroundTruth = std::map<std::string, std::vector<BoundingBox>, std::less<>>;

GroundTruth ground_truth_of(const LabeledDataset &ds, const std::string &category = "car");

struct MatchResult {
  std::vector<Detection> ordered;  // confidence descending, deterministic ties
  std::vector<bool> is_tp;         // parallel to `ordered`
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t total_gt = 0;
};

/// Orders detections by confidence (desc), then image id, then the canonical
/// box serialization.
void sort_detections(std::vector<Detection> &dets);

/// Greedy matching: each detection takes its best-IoU unmatched ground truth
/// in the same image if that IoU reaches the threshold.
MatchResult match_detections(std::vector<Detection> dets, const GroundTruth &gts, double iou_threshold);

struct PRCurve {
  std::vector<std::pair<double, double>> points;        // (recall, precision) per detection
  std::vector<std::pair<double, double>> interpolated;  // (recall, max precision at recall' >= recall)
};

struct ApResult {
  PRCurve curve;
  double ap = 0.0;
};

/// All-point interpolated AP. Precision past the highest achieved recall is 0.
ApResult interpolated_ap(const std::vector<bool> &labels, size_t total_gt);

struct EvalReport {
  std::map<std::string, double> per_class_ap;
  double map = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  double iou_threshold = 0.5;
  std::map<std::string, PRCurve> curves;

  nlohmann::json to_json(bool include_curves = true) const;
  static EvalReport from_json(const nlohmann::json &j);
  std::string to_csv() const;
};

EvalReport evaluate(const std::vector<Detection> &dets, const LabeledDataset &dataset, double iou_threshold = 0.5);

/// JSON array of {image_id, x1, y1, x2, y2, confidence}.
std::vector<Detection> load_detections(const std::filesystem::path &path);
std::vector<Detection> detections_from_json(const nlohmann::json &j);
nlohmann::json detections_to_json(const std::vector<Detection> &dets);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_EVAL_HPP
