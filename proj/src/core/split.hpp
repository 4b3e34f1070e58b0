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

#ifndef FAKENIGHT_CORE_SPLIT_HPP
#define FAKENIGHT_CORE_SPLIT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "core/types.hpp"

namespace fakenight {

struct SplitPlan {
  size_t day_train = 3000;
  size_t day_test = 3000;
  size_t night_train = 3000;
  size_t night_test = 3000;
  uint64_t seed = 0;

  size_t total() const { return day_train + day_test + night_train + night_test; }

  nlohmann::json to_json() const;
  /// Accepts {"total", "subsets": {...}, "seed"}; a stated total must equal the
  /// sum of the subsets.
  static SplitPlan from_json(const nlohmann::json &j);
};

struct SplitResult {
  LabeledDataset day_train;
  LabeledDataset day_test;
  LabeledDataset night_train;
  LabeledDataset night_test;
};

/// Uniform index permutation from a seeded mt19937_64 (Fisher-Yates with
/// rejection-sampled bounds, so it is identical across standard libraries).
std::vector<size_t> seeded_permutation(size_t n, uint64_t seed);

/// Seeded sampling without replacement; day pool feeds the day subsets and
/// night pool the night subsets.
SplitResult split_sample(const LabeledDataset &pool_day, const LabeledDataset &pool_night, const SplitPlan &plan);

std::string prefixed_id(const std::string &source, const std::string &id);

/// Concatenates in reference order; ids become "<source>__<id>".
LabeledDataset compose_training_set(const std::vector<LabeledDataset> &parts, const std::string &name);

/// Record order permuted by `seed`.
LabeledDataset shuffled(const LabeledDataset &ds, uint64_t seed);

}  // namespace fakenight

#endif  // FAKENIGHT_CORE_SPLIT_HPP
