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

#include <set>

#include <gtest/gtest.h>

#include "core/error.hpp"
#include "core/split.hpp"

namespace fakenight {
namespace {

LabeledDataset pool(const std::string &prefix, size_t n) {
  LabeledDataset ds{prefix + "_pool", {}};
  for (size_t i = 0; i < n; ++i) {
    ds.records.push_back({prefix + std::to_string(100000 + i), 256, 256, {}, {{1, 1, 30, 30}}, "/x/" + std::to_string(i)});
  }
  return ds;
}

std::set<std::string> ids(const LabeledDataset &ds) {
  std::set<std::string> s;
  for (const auto &r : ds.records) s.insert(r.id);
  return s;
}

TEST(SplitTest, DefaultPlanGivesFourDisjointSubsets) {
  const auto day = pool("d", 6500), night = pool("n", 7000);
  const auto r = split_sample(day, night, SplitPlan{3000, 3000, 3000, 3000, 42});
  const std::vector<const LabeledDataset *> parts{&r.day_train, &r.day_test, &r.night_train, &r.night_test};
  std::set<std::string> all;
  for (const auto *p : parts) {
    EXPECT_EQ(p->records.size(), 3000u);
    EXPECT_EQ(ids(*p).size(), 3000u);
    all.merge(ids(*p));
  }
  EXPECT_EQ(all.size(), 12000u);
  const auto day_ids = ids(day);
  for (const auto &id : ids(r.day_train)) EXPECT_TRUE(day_ids.contains(id));
  for (const auto &id : ids(r.day_test)) EXPECT_TRUE(day_ids.contains(id));
  EXPECT_EQ(r.day_train.name, "day_train");
  EXPECT_EQ(r.night_test.name, "night_test");
  EXPECT_TRUE(std::is_sorted(r.day_test.records.begin(), r.day_test.records.end(),
                             [](const auto &a, const auto &b) { return a.id < b.id; }));
}

TEST(SplitTest, DeterministicPerSeed) {
  const auto day = pool("d", 50), night = pool("n", 50);
  const SplitPlan plan{10, 10, 10, 10, 7};
  const auto a = split_sample(day, night, plan);
  const auto b = split_sample(day, night, plan);
  EXPECT_EQ(a.day_train, b.day_train);
  EXPECT_EQ(a.night_test, b.night_test);
  SplitPlan other = plan;
  other.seed = 8;
  EXPECT_NE(split_sample(day, night, other).day_train, a.day_train);
}

TEST(SplitTest, DayDrawIgnoresNightPoolSize) {
  const SplitPlan plan{5, 5, 5, 5, 3};
  EXPECT_EQ(split_sample(pool("d", 40), pool("n", 20), plan).day_train,
            split_sample(pool("d", 40), pool("n", 90), plan).day_train);
}

TEST(SplitTest, InsufficientPoolStatesShortfall) {
  try {
    split_sample(pool("d", 5), pool("n", 100), SplitPlan{10, 0, 1, 1, 0});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    EXPECT_NE(std::string(e.what()).find("short by 5"), std::string::npos) << e.what();
  }
}

TEST(SplitTest, PlanJson) {
  const SplitPlan p = SplitPlan::from_json({{"total", 12000},
                                            {"subsets", {{"day_train", 3000}, {"day_test", 3000}, {"night_train", 3000}, {"night_test", 3000}}},
                                            {"seed", 5}});
  EXPECT_EQ(p.total(), 12000u);
  EXPECT_EQ(p.seed, 5u);
  EXPECT_EQ(SplitPlan::from_json(p.to_json()).to_json(), p.to_json());
  EXPECT_THROW(SplitPlan::from_json({{"total", 100}, {"subsets", {{"day_train", 1}}}}), Error);
}

TEST(PermutationTest, IsAPermutationAndRoughlyUniform) {
  const size_t n = 5;
  std::vector<std::vector<int>> counts(n, std::vector<int>(n, 0));
  for (uint64_t seed = 0; seed < 5000; ++seed) {
    const auto p = seeded_permutation(n, seed);
    std::set<size_t> s(p.begin(), p.end());
    ASSERT_EQ(s.size(), n);
    for (size_t i = 0; i < n; ++i) ++counts[i][p[i]];
  }
  for (const auto &row : counts) {
    for (int c : row) EXPECT_NEAR(c, 1000, 150);
  }
  EXPECT_TRUE(seeded_permutation(0, 1).empty());
}

TEST(ComposeTest, PrefixesAndConcatenates) {
  auto day = pool("x", 3);
  day.name = "day";
  auto fake = pool("x", 3);
  fake.name = "fake_night";
  const auto u = compose_training_set({day, fake}, "day_fake");
  ASSERT_EQ(u.records.size(), 6u);
  EXPECT_EQ(u.name, "day_fake");
  EXPECT_EQ(u.records[0].id, "day__x100000");
  EXPECT_EQ(u.records[3].id, "fake_night__x100000");
  EXPECT_EQ(u.records[3].boxes, fake.records[0].boxes);
}

TEST(ComposeTest, OrderIsSourceThenId) {
  LabeledDataset a{"a", {{"z", 1, 1, {}, {}, ""}, {"b", 1, 1, {}, {}, ""}}};
  const auto u = compose_training_set({a}, "u");
  EXPECT_EQ(u.records[0].id, "a__b");
  EXPECT_EQ(u.records[1].id, "a__z");
}

TEST(ComposeTest, EmptyPartIsIdentity) {
  auto day = pool("d", 4);
  day.name = "day";
  const LabeledDataset empty{"night", {}};
  EXPECT_EQ(compose_training_set({day, empty}, "u").records, compose_training_set({day}, "u").records);
}

TEST(ComposeTest, ExchangedOrderGivesSameRecordMultiset) {
  auto day = pool("d", 4);
  day.name = "day";
  auto fake = pool("f", 3);
  fake.name = "fake_night";
  auto ab = compose_training_set({day, fake}, "u").records;
  auto ba = compose_training_set({fake, day}, "u").records;
  auto by_id = [](const auto &x, const auto &y) { return x.id < y.id; };
  std::sort(ab.begin(), ab.end(), by_id);
  std::sort(ba.begin(), ba.end(), by_id);
  EXPECT_EQ(ab, ba);
}

TEST(ComposeTest, DuplicatePrefixedIdIsRejected) {
  auto day = pool("d", 2);
  day.name = "day";
  EXPECT_THROW(compose_training_set({day, day}, "u"), Error);
}

TEST(ShuffleTest, SeededReordering) {
  const auto ds = pool("d", 30);
  const auto a = shuffled(ds, 1);
  EXPECT_EQ(a, shuffled(ds, 1));
  EXPECT_NE(a.records, shuffled(ds, 2).records);
  EXPECT_EQ(ids(a), ids(ds));
}

}  // namespace
}  // namespace fakenight
