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

#ifndef FAKENIGHT_TESTS_REFERENCE_EVAL_HPP
#define FAKENIGHT_TESTS_REFERENCE_EVAL_HPP

// Straight-line VOC evaluator used as an oracle. Shares no code with the
// library: its own IoU, its own matching loop and a per-TP formulation of
// interpolated AP (each TP adds 1/G of recall at the best precision reached
// at or after it).

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fakenight::testing {

struct RefBox {
  double x1, y1, x2, y2;
};

struct RefDetection {
  std::string image;
  RefBox box;
  double confidence;
};

inline double ref_iou(const RefBox &a, const RefBox &b) {
  const double ix1 = a.x1 > b.x1 ? a.x1 : b.x1;
  const double iy1 = a.y1 > b.y1 ? a.y1 : b.y1;
  const double ix2 = a.x2 < b.x2 ? a.x2 : b.x2;
  const double iy2 = a.y2 < b.y2 ? a.y2 : b.y2;
  double inter = 0.0;
  if (ix2 > ix1 && iy2 > iy1) inter = (ix2 - ix1) * (iy2 - iy1);
  const double ua = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter;
  return ua > 0.0 ? inter / ua : 0.0;
}

struct RefResult {
  double ap = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
};

/// Detections must carry distinct confidences.
inline RefResult reference_evaluate(std::vector<RefDetection> dets, const std::map<std::string, std::vector<RefBox>> &gt,
                                    double threshold) {
  std::sort(dets.begin(), dets.end(), [](const auto &a, const auto &b) { return a.confidence > b.confidence; });
  size_t total = 0;
  std::map<std::string, std::vector<int>> used;
  for (const auto &[id, boxes] : gt) {
    total += boxes.size();
    used[id] = std::vector<int>(boxes.size(), 0);
  }
  std::vector<int> label;
  for (const auto &d : dets) {
    const auto &boxes = gt.at(d.image);
    int best = -1;
    double best_iou = -1.0;
    for (size_t g = 0; g < boxes.size(); ++g) {
      if (used[d.image][g]) continue;
      const double o = ref_iou(d.box, boxes[g]);
      if (o > best_iou) {
        best_iou = o;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0 && best_iou >= threshold) {
      used[d.image][best] = 1;
      label.push_back(1);
    } else {
      label.push_back(0);
    }
  }
  RefResult r;
  std::vector<double> precision(label.size());
  size_t tp = 0;
  for (size_t i = 0; i < label.size(); ++i) {
    tp += label[i];
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (size_t i = 0; i < label.size(); ++i) {
    if (!label[i]) continue;
    double best = 0.0;
    for (size_t j = i; j < label.size(); ++j) best = std::max(best, precision[j]);
    r.ap += best / static_cast<double>(total);
  }
  r.tp = tp;
  r.fp = label.size() - tp;
  r.fn = total - tp;
  return r;
}

struct RefInstance {
  std::map<std::string, std::vector<RefBox>> gt;
  std::vector<RefDetection> dets;
};

/// Up to `max_images` images, <= 5 GTs and <= 10 detections each. Detections
/// are perturbed copies of GTs or random boxes; confidences are distinct.
inline RefInstance random_instance(std::mt19937_64 &rng, int max_images = 6) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto rand_box = [&] {
    const double x = u(rng) * 80, y = u(rng) * 80;
    return RefBox{x, y, x + 4 + u(rng) * 30, y + 4 + u(rng) * 30};
  };
  RefInstance inst;
  std::set<double> confidences;
  const int images = 1 + static_cast<int>(u(rng) * max_images);
  for (int i = 0; i < images; ++i) {
    const std::string id = "im" + std::to_string(i);
    auto &boxes = inst.gt[id];
    const int g = static_cast<int>(u(rng) * 6);
    for (int k = 0; k < g; ++k) boxes.push_back(rand_box());
    const int d = static_cast<int>(u(rng) * 11);
    for (int k = 0; k < d; ++k) {
      RefBox b = rand_box();
      if (!boxes.empty() && u(rng) < 0.7) {
        const RefBox &src = boxes[static_cast<size_t>(u(rng) * boxes.size()) % boxes.size()];
        const double s = 6.0 * u(rng);
        b = {src.x1 + (u(rng) - 0.5) * s, src.y1 + (u(rng) - 0.5) * s, src.x2 + (u(rng) - 0.5) * s,
             src.y2 + (u(rng) - 0.5) * s};
      }
      double c = u(rng);
      while (!confidences.insert(c).second) c = u(rng);
      inst.dets.push_back({id, b, c});
    }
  }
  return inst;
}

}  // namespace fakenight::testing

#endif  // FAKENIGHT_TESTS_REFERENCE_EVAL_HPP
