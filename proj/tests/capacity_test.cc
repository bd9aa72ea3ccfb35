// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "gtest/gtest.h"

#include "oracles/vertex_enumeration.hpp"
#include "spir/capacity.hpp"
#include "spir/random_patterns.hpp"
#include "test_util.hpp"

namespace spir {
namespace {

using testing::ExampleCollusion;
using testing::ExampleEavesdropping;
using testing::P;
using testing::R;
using testing::Rs;

Pattern NoEavesdropper(int n) { return Pattern{n, {}, PatternKind::kEavesdropping}; }

TEST(SpirCapacityTest, WorkedExample) {
  auto r = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(), R(3, 5));
  EXPECT_EQ(r.f_star, R(8, 3));
  EXPECT_EQ(r.capacity, R(5, 8));
  EXPECT_EQ(r.rho_threshold, R(3, 5));
  EXPECT_TRUE(r.achievable);
  EXPECT_EQ(r.y_star, Rs({{1, 3}, {1, 3}, {1, 3}, {2, 3}, {1, 1}}));
  EXPECT_TRUE(r.added_singletons.empty());
}

TEST(SpirCapacityTest, OriginalSpir) {
  for (int n = 2; n <= 6; ++n) {
    auto r = SpirCapacity(SingletonPattern(n), NoEavesdropper(n), R(1, n - 1));
    EXPECT_EQ(r.capacity, 1 - R(1, n));
    EXPECT_EQ(r.f_star, R(n));
  }
}

TEST(SpirCapacityTest, ZeroRhoGivesZero) {
  auto r = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(), R(0));
  EXPECT_EQ(r.capacity, 0);
  EXPECT_FALSE(r.achievable);
  EXPECT_EQ(r.conditional_capacity, R(5, 8));
}

TEST(SpirCapacityTest, ThresholdIsInclusive) {
  auto just_below = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(),
                                 R(3, 5) - R(1, 1000000));
  EXPECT_EQ(just_below.capacity, 0);
  auto at = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(), R(3, 5));
  EXPECT_EQ(at.capacity, R(5, 8));
}

TEST(SpirCapacityTest, NoRhoReportsConditionalValue) {
  auto r = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(), std::nullopt);
  EXPECT_EQ(r.capacity, R(5, 8));
  EXPECT_EQ(r.rho_threshold, R(3, 5));
  EXPECT_FALSE(r.rho_given.has_value());
}

TEST(SpirCapacityTest, FullSetRejected) {
  Pattern full{3, {ServerSet{{0, 1, 2}}}, PatternKind::kCollusion};
  try {
    SpirCapacity(full, NoEavesdropper(3), R(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFullSetPresent);
  }
  Pattern eve_full{3, {ServerSet{{0, 1, 2}}}, PatternKind::kEavesdropping};
  EXPECT_THROW(SpirCapacity(SingletonPattern(3), eve_full, R(1)), Error);
}

TEST(SpirCapacityTest, UncoveredServersAreCompleted) {
  auto r = SpirCapacity(P(3, {{1, 2}}), NoEavesdropper(3), R(1));
  EXPECT_EQ(r.added_singletons, std::vector<int>{2});
  EXPECT_EQ(r.f_star, R(2));
  EXPECT_EQ(r.capacity, R(1, 2));
}

TEST(TEspirCapacityTest, Examples) {
  EXPECT_EQ(TEspirCapacity(4, 2, 3, R(3)), R(1, 4));
  EXPECT_EQ(TEspirCapacity(2, 1, 1, R(1)), R(1, 2));
  // All ten pairs of five servers: F* = 5/2, threshold 2/3.
  EXPECT_EQ(TEspirCapacity(5, 2, 2, R(2, 3)), R(3, 5));
  EXPECT_EQ(TEspirCapacity(5, 2, 2, R(1, 2)), 0);
  EXPECT_EQ(oracle::PackingByVertices(
                BuildIncidenceMatrix(SymmetricPattern(5, 2, PatternKind::kJoint)))
                .value,
            R(5, 2));
}

TEST(TEspirCapacityTest, FullSetErrors) {
  try {
    TEspirCapacity(3, 3, 1, R(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFullSetPresent);
  }
  EXPECT_THROW(TEspirCapacity(3, 1, 3, R(1)), Error);
}

TEST(TEspirCapacityTest, ClosedFormSweep) {
  for (int n = 2; n <= 6; ++n) {
    for (int t = 1; t < n; ++t) {
      for (int e = 1; e < n; ++e) {
        int m = std::max(t, e);
        Rational threshold(m, n - m);
        EXPECT_EQ(TEspirCapacity(n, t, e, threshold), 1 - Rational(m, n));
        EXPECT_EQ(TEspirCapacity(n, t, e, threshold - R(1, 1000)), 0);
      }
    }
  }
}

TEST(PirEavesdropCapacityTest, Examples) {
  auto triples = SymmetricPattern(4, 3, PatternKind::kEavesdropping);
  EXPECT_EQ(PirEavesdropCapacity(triples, R(100)), R(1, 4));
  EXPECT_EQ(PirEavesdropCapacity(NoEavesdropper(5), R(1, 4)), R(4, 5));
  // Worked-example eavesdroppers alone: F* = 3 by vertex enumeration.
  auto r = PirEavesdropReport(ExampleEavesdropping(), R(1));
  EXPECT_EQ(r.f_star, R(3));
  EXPECT_EQ(r.capacity, R(2, 3));
  EXPECT_EQ(oracle::PackingByVertices(BuildIncidenceMatrix(r.joint_pattern)).value, R(3));
}

TEST(PirEavesdropCapacityTest, FlagsUncoveredEavesdroppingPattern) {
  auto pe = P(4, {{1, 2, 3}}, PatternKind::kEavesdropping);
  auto r = PirEavesdropReport(pe, R(1));
  EXPECT_EQ(r.joint_pattern.sets, CompleteCoverage(pe).sets);
  bool flagged = false;
  for (const auto& note : r.notes) flagged |= note.find("unbounded") != std::string::npos;
  EXPECT_TRUE(flagged);
}

class CapacityPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{99};
};

TEST_F(CapacityPropertyTest, PatternsAreInterchangeable) {
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(2, 6);
    int n = n_dist(rng_);
    auto a = RandomPattern(rng_, n, n, PatternKind::kCollusion);
    auto b = RandomPattern(rng_, n, n, PatternKind::kEavesdropping);
    Rational rho(trial % 7, 3);
    auto ab = SpirCapacity(a, b, rho);
    auto ba = SpirCapacity(b, a, rho);
    EXPECT_EQ(ab.capacity, ba.capacity);
    EXPECT_EQ(ab.f_star, ba.f_star);
  }
}

TEST_F(CapacityPropertyTest, GrowthNeverIncreasesCapacity) {
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(2, 6);
    int n = n_dist(rng_);
    auto pc = RandomPattern(rng_, n, n, PatternKind::kCollusion);
    auto pe = RandomPattern(rng_, n, n, PatternKind::kEavesdropping);
    auto extra = RandomPattern(rng_, n, 2, PatternKind::kEavesdropping);
    auto grown = JoinPatterns(pe, extra);
    grown.kind = PatternKind::kEavesdropping;
    Rational rho(5);
    EXPECT_LE(SpirCapacity(pc, grown, rho).capacity, SpirCapacity(pc, pe, rho).capacity);
  }
}

TEST_F(CapacityPropertyTest, CapacityRange) {
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> n_dist(2, 6);
    int n = n_dist(rng_);
    auto pc = RandomPattern(rng_, n, n, PatternKind::kCollusion);
    Rational rho(trial % 5, 4);
    auto r = SpirCapacity(pc, NoEavesdropper(n), rho);
    EXPECT_GE(r.capacity, 0);
    EXPECT_LT(r.capacity, 1);
    EXPECT_GT(r.f_star, 1);
    EXPECT_GT(r.rho_threshold, 0);
    EXPECT_EQ(r.capacity > 0, rho >= r.rho_threshold);
  }
}

TEST(CapacityJsonTest, RationalsCarryNumDen) {
  auto r = SpirCapacity(ExampleCollusion(), ExampleEavesdropping(), R(3, 5));
  auto j = CapacityReportToJson(r);
  EXPECT_EQ(j["f_star"]["num"], 8);
  EXPECT_EQ(j["f_star"]["den"], 3);
  EXPECT_EQ(j["capacity"]["exact"], "5/8");
  EXPECT_EQ(j["capacity"]["decimal"], "0.625000");
  EXPECT_EQ(RationalFromJson(j["rho_threshold"]), R(3, 5));
  EXPECT_EQ(j["joint_pattern"],
            nlohmann::json::parse("[[5],[1,4],[2,4],[3,4],[1,2,3]]"));
}

}  // namespace
}  // namespace spir
