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

#include "core/eval.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "core/dataset_io.hpp"
#include "core/error.hpp"

namespace fakenight {

using nlohmann::json;

double iou(const BoundingBox &a, const BoundingBox &b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

GroundTruth ground_truth_of(const LabeledDataset &ds, const std::string &category) {
  GroundTruth gt;
  for (const auto &r : ds.records) {
    auto &boxes = gt[r.id];
    for (const auto &b : r.boxes) {
      if (b.category == category) boxes.push_back(b);
    }
  }
  return gt;
}

void sort_detections(std::vector<Detection> &dets) {
  std::vector<std::pair<std::string, size_t>> keys;
  keys.reserve(dets.size());
  for (size_t i = 0; i < dets.size(); ++i) keys.emplace_back(box_to_json(dets[i].box).dump(), i);
  std::vector<size_t> order(dets.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto &da = dets[a];
    const auto &db = dets[b];
    if (da.confidence != db.confidence) return da.confidence > db.confidence;
    if (da.image_id != db.image_id) return da.image_id < db.image_id;
    return keys[a].first < keys[b].first;
  });
  std::vector<Detection> sorted;
  sorted.reserve(dets.size());
  for (size_t i : order) sorted.push_back(std::move(dets[i]));
  dets = std::move(sorted);
}

MatchResult match_detections(std::vector<Detection> dets, const GroundTruth &gts, double iou_threshold) {
  MatchResult res;
  std::map<std::string, std::vector<bool>, std::less<>> matched;
  for (const auto &[id, boxes] : gts) {
    matched[id].assign(boxes.size(), false);
    res.total_gt += boxes.size();
  }
  for (const auto &d : dets) {
    if (!gts.contains(d.image_id)) {
      throw Error(ErrorCode::kInvalidArgument, "detection references unknown image id '" + d.image_id + "'");
    }
  }

  sort_detections(dets);
  res.is_tp.reserve(dets.size());
  for (const auto &d : dets) {
    const auto &boxes = gts.find(d.image_id)->second;
    auto &used = matched.find(d.image_id)->second;
    double best = -1.0;
    size_t best_idx = boxes.size();
    for (size_t g = 0; g < boxes.size(); ++g) {
      if (used[g]) continue;
      const double o = iou(d.box, boxes[g]);
      if (o > best) {
        best = o;
        best_idx = g;
      }
    }
    const bool tp = best_idx < boxes.size() && best >= iou_threshold;
    if (tp) {
      used[best_idx] = true;
      ++res.tp;
    } else {
      ++res.fp;
    }
    res.is_tp.push_back(tp);
  }
  res.fn = res.total_gt - res.tp;
  res.ordered = std::move(dets);
  return res;
}

ApResult interpolated_ap(const std::vector<bool> &labels, size_t total_gt) {
  if (total_gt == 0) throw Error(ErrorCode::kUndefined, "AP is undefined without ground-truth boxes");
  ApResult res;
  auto &pts = res.curve.points;
  pts.reserve(labels.size());
  size_t tp = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) ++tp;
    pts.emplace_back(static_cast<double>(tp) / total_gt, static_cast<double>(tp) / (i + 1));
  }

  // Suffix maximum, then widened to every point sharing the same recall.
  std::vector<double> interp(pts.size());
  double running = 0.0;
  for (size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].second);
    interp[i] = running;
  }
  for (size_t i = 0; i < pts.size();) {
    size_t j = i;
    while (j < pts.size() && pts[j].first == pts[i].first) ++j;
    for (size_t k = i; k < j; ++k) interp[k] = interp[i];
    i = j;
  }

  double prev_recall = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    res.curve.interpolated.emplace_back(pts[i].first, interp[i]);
    if (pts[i].first > prev_recall) {
      res.ap += (pts[i].first - prev_recall) * interp[i];
      prev_recall = pts[i].first;
    }
  }
  return res;
}

json EvalReport::to_json(bool include_curves) const {
  json j{{"per_class_ap", per_class_ap}, {"mAP", map},
         {"counts", {{"tp", tp}, {"fp", fp}, {"fn", fn}}}, {"iou_threshold", iou_threshold}};
  if (include_curves) {
    json cj = json::object();
    for (const auto &[cls, c] : curves) cj[cls] = {{"points", c.points}, {"interpolated", c.interpolated}};
    j["curves"] = std::move(cj);
  }
  return j;
}

EvalReport EvalReport::from_json(const json &j) {
  EvalReport r;
  r.per_class_ap = j.at("per_class_ap").get<std::map<std::string, double>>();
  r.map = j.at("mAP").get<double>();
  r.tp = j.at("counts").at("tp").get<size_t>();
  r.fp = j.at("counts").at("fp").get<size_t>();
  r.fn = j.at("counts").at("fn").get<size_t>();
  r.iou_threshold = j.at("iou_threshold").get<double>();
  if (j.contains("curves")) {
    for (auto it = j["curves"].begin(); it != j["curves"].end(); ++it) {
      PRCurve c;
      c.points = it.value().at("points").get<std::vector<std::pair<double, double>>>();
      c.interpolated = it.value().at("interpolated").get<std::vector<std::pair<double, double>>>();
      r.curves[it.key()] = std::move(c);
    }
  }
  return r;
}

std::string EvalReport::to_csv() const {
  std::string out = "class,ap,tp,fp,fn,iou_threshold\n";
  for (const auto &[cls, ap] : per_class_ap) {
    out += fmt::format("{},{:.6f},{},{},{},{:.3f}\n", cls, ap, tp, fp, fn, iou_threshold);
  }
  out += fmt::format("mAP,{:.6f},{},{},{},{:.3f}\n", map, tp, fp, fn, iou_threshold);
  return out;
}

EvalReport evaluate(const std::vector<Detection> &dets, const LabeledDataset &dataset, double iou_threshold) {
  EvalReport report;
  report.iou_threshold = iou_threshold;

  std::vector<std::string> classes;
  for (const auto &r : dataset.records) {
    for (const auto &b : r.boxes) {
      if (std::find(classes.begin(), classes.end(), b.category) == classes.end()) classes.push_back(b.category);
    }
  }
  if (classes.empty()) throw Error(ErrorCode::kUndefined, "dataset '" + dataset.name + "' has no ground truth");
  std::sort(classes.begin(), classes.end());

  double sum = 0.0;
  for (const auto &cls : classes) {
    std::vector<Detection> class_dets;
    for (const auto &d : dets) {
      if (d.box.category == cls) class_dets.push_back(d);
    }
    MatchResult m = match_detections(std::move(class_dets), ground_truth_of(dataset, cls), iou_threshold);
    ApResult ap = interpolated_ap(m.is_tp, m.total_gt);
    report.per_class_ap[cls] = ap.ap;
    report.curves[cls] = std::move(ap.curve);
    report.tp += m.tp;
    report.fp += m.fp;
    report.fn += m.fn;
    sum += ap.ap;
  }
  report.map = sum / static_cast<double>(classes.size());
  return report;
}

std::vector<Detection> detections_from_json(const json &j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "detections file must hold a JSON array");
  std::vector<Detection> out;
  out.reserve(j.size());
  try {
    for (const auto &jd : j) {
      Detection d;
      d.image_id = jd.at("image_id").get<std::string>();
      d.box.x1 = jd.at("x1").get<double>();
      d.box.y1 = jd.at("y1").get<double>();
      d.box.x2 = jd.at("x2").get<double>();
      d.box.y2 = jd.at("y2").get<double>();
      d.box.category = jd.value("category", std::string("car"));
      d.confidence = jd.at("confidence").get<double>();
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
        throw Error(ErrorCode::kInvariant, "detection confidence outside [0,1] for image '" + d.image_id + "'");
      }
      out.push_back(std::move(d));
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("malformed detections: ") + e.what());
  }
  return out;
}

std::vector<Detection> load_detections(const std::filesystem::path &path) {
  return detections_from_json(read_json_file(path));
}

json detections_to_json(const std::vector<Detection> &dets) {
  json arr = json::array();
  for (const auto &d : dets) {
    arr.push_back({{"image_id", d.image_id},
                   {"x1", round_coord(d.box.x1)},
                   {"y1", round_coord(d.box.y1)},
                   {"x2", round_coord(d.box.x2)},
                   {"y2", round_coord(d.box.y2)},
                   {"confidence", d.confidence}});
  }
  return arr;
}

}  // namespace fakenight
