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

#include "core/split.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "core/error.hpp"

namespace fakenight {

using nlohmann::json;

json SplitPlan::to_json() const {
  return {{"total", total()},
          {"subsets",
           {{"day_train", day_train}, {"day_test", day_test}, {"night_train", night_train}, {"night_test", night_test}}},
          {"seed", seed}};
}

SplitPlan SplitPlan::from_json(const json &j) {
  SplitPlan p;
  if (j.contains("subsets")) {
    const auto &s = j["subsets"];
    p.day_train = s.value("day_train", p.day_train);
    p.day_test = s.value("day_test", p.day_test);
    p.night_train = s.value("night_train", p.night_train);
    p.night_test = s.value("night_test", p.night_test);
  }
  p.seed = j.value("seed", p.seed);
  if (j.contains("total") && j["total"].get<size_t>() != p.total()) {
    throw Error(ErrorCode::kInvalidArgument, "split subsets sum to " + std::to_string(p.total()) +
                                                 ", not the stated total " + std::to_string(j["total"].get<size_t>()));
  }
  return p;
}

namespace {

uint64_t bounded(std::mt19937_64 &rng, uint64_t bound) {
  // Unbiased draw in [0, bound).
  const uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

LabeledDataset take(const LabeledDataset &pool, const std::vector<size_t> &perm, size_t begin, size_t count,
                    const std::string &name) {
  LabeledDataset out;
  out.name = name;
  for (size_t i = begin; i < begin + count; ++i) out.records.push_back(pool.records[perm[i]]);
  canonicalize(out);
  return out;
}

}  // namespace

std::vector<size_t> seeded_permutation(size_t n, uint64_t seed) {
  std::vector<size_t> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[bounded(rng, i)]);
  return perm;
}

SplitResult split_sample(const LabeledDataset &pool_day, const LabeledDataset &pool_night, const SplitPlan &plan) {
  const size_t need_day = plan.day_train + plan.day_test;
  const size_t need_night = plan.night_train + plan.night_test;
  std::string shortfall;
  if (pool_day.records.size() < need_day) {
    shortfall += "day pool has " + std::to_string(pool_day.records.size()) + " records, plan needs " +
                 std::to_string(need_day) + " (short by " + std::to_string(need_day - pool_day.records.size()) + ")";
  }
  if (pool_night.records.size() < need_night) {
    if (!shortfall.empty()) shortfall += "; ";
    shortfall += "night pool has " + std::to_string(pool_night.records.size()) + " records, plan needs " +
                 std::to_string(need_night) + " (short by " +
                 std::to_string(need_night - pool_night.records.size()) + ")";
  }
  if (!shortfall.empty()) throw Error(ErrorCode::kInvalidArgument, "insufficient pool: " + shortfall);

  // Independent streams per pool so the day draw does not depend on the night pool size.
  const auto day_perm = seeded_permutation(pool_day.records.size(), plan.seed);
  const auto night_perm = seeded_permutation(pool_night.records.size(), plan.seed ^ 0x9E3779B97F4A7C15ULL);

  SplitResult r;
  r.day_train = take(pool_day, day_perm, 0, plan.day_train, "day_train");
  r.day_test = take(pool_day, day_perm, plan.day_train, plan.day_test, "day_test");
  r.night_train = take(pool_night, night_perm, 0, plan.night_train, "night_train");
  r.night_test = take(pool_night, night_perm, plan.night_train, plan.night_test, "night_test");
  return r;
}

std::string prefixed_id(const std::string &source, const std::string &id) { return source + "__" + id; }

LabeledDataset compose_training_set(const std::vector<LabeledDataset> &parts, const std::string &name) {
  LabeledDataset out;
  out.name = name;
  std::set<std::string> seen;
  for (const auto &part : parts) {
    std::vector<SourceImageRecord> recs = part.records;
    std::stable_sort(recs.begin(), recs.end(), [](const auto &a, const auto &b) { return a.id < b.id; });
    for (auto &r : recs) {
      r.id = prefixed_id(part.name, r.id);
      if (!seen.insert(r.id).second) {
        throw Error(ErrorCode::kInvariant, "duplicate prefixed id '" + r.id + "' while composing '" + name + "'");
      }
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

LabeledDataset shuffled(const LabeledDataset &ds, uint64_t seed) {
  LabeledDataset out;
  out.name = ds.name;
  for (size_t i : seeded_permutation(ds.records.size(), seed)) out.records.push_back(ds.records[i]);
  return out;
}

}  // namespace fakenight
