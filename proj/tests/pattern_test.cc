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

#include "spir/pattern.hpp"
#include "spir/random_patterns.hpp"
#include "test_util.hpp"

namespace spir {
namespace {

using testing::ExampleCollusion;
using testing::ExampleEavesdropping;
using testing::P;
using testing::Sets;

std::vector<ServerSet> Sorted(std::vector<ServerSet> s) {
  std::sort(s.begin(), s.end(), CanonicalLess);
  return s;
}

TEST(ReduceMaximalTest, DropsContainedSets) {
  auto p = ReduceMaximal(Sets({{1, 2, 3}, {1, 2}}), 3, PatternKind::kCollusion);
  EXPECT_EQ(p.sets, Sets({{1, 2, 3}}));
}

TEST(ReduceMaximalTest, KeepsIncomparableSets) {
  auto p = ReduceMaximal(Sets({{1}, {2}, {3}}), 3, PatternKind::kCollusion);
  EXPECT_EQ(p.sets, Sets({{1}, {2}, {3}}));
}

TEST(ReduceMaximalTest, DeduplicatesAndOrders) {
  auto p = ReduceMaximal(Sets({{1, 2}, {2, 3}, {1, 2}, {2}}), 3,
                         PatternKind::kCollusion);
  EXPECT_EQ(p.sets, Sets({{1, 2}, {2, 3}}));
}

TEST(ReduceMaximalTest, CanonicalOrderIsCardinalityThenLex) {
  auto p = ReduceMaximal(Sets({{1, 2, 3}, {3, 4}, {5}, {1, 4}}), 5,
                         PatternKind::kJoint);
  EXPECT_EQ(p.sets, Sets({{5}, {1, 4}, {3, 4}, {1, 2, 3}}));
}

TEST(ReduceMaximalTest, Errors) {
  try {
    ReduceMaximal({}, 3, PatternKind::kCollusion);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyPattern);
  }
  EXPECT_NO_THROW(ReduceMaximal({}, 3, PatternKind::kEavesdropping));
  try {
    ReduceMaximal({ServerSet{{0, 3}}}, 3, PatternKind::kCollusion);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIndexOutOfRange);
  }
  try {
    ReduceMaximal({ServerSet{}}, 3, PatternKind::kCollusion);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySet);
  }
}

TEST(JoinPatternsTest, SystemModelExample) {
  auto j = JoinPatterns(P(4, {{1, 2}, {3, 4}}),
                        P(4, {{1, 2, 3}, {4}}, PatternKind::kEavesdropping));
  EXPECT_EQ(j.kind, PatternKind::kJoint);
  EXPECT_EQ(j.sets, Sorted(Sets({{1, 2, 3}, {3, 4}})));
}

TEST(JoinPatternsTest, WorkedExample) {
  auto j = JoinPatterns(ExampleCollusion(), ExampleEavesdropping());
  EXPECT_EQ(j.sets, Sorted(Sets({{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}, {5}})));
}

TEST(JoinPatternsTest, EmptyEavesdroppingIsIdentity) {
  auto pc = ExampleCollusion();
  auto j = JoinPatterns(pc, Pattern{5, {}, PatternKind::kEavesdropping});
  EXPECT_EQ(j.sets, pc.sets);
}

TEST(JoinPatternsTest, MismatchedN) {
  try {
    JoinPatterns(P(3, {{1}}), P(4, {{1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMismatchedServers);
  }
}

TEST(CompleteCoverageTest, AddsMissingSingletons) {
  EXPECT_EQ(CompleteCoverage(P(3, {{1, 2}})).sets, Sorted(Sets({{1, 2}, {3}})));
  auto pe = P(4, {{1, 2, 3}}, PatternKind::kEavesdropping);
  EXPECT_EQ(CompleteCoverage(pe).sets, Sorted(Sets({{1, 2, 3}, {4}})));
  auto joint = JoinPatterns(ExampleCollusion(), ExampleEavesdropping());
  EXPECT_EQ(CompleteCoverage(joint), joint);
}

TEST(IncidenceMatrixTest, SystemModelExample) {
  auto p = P(4, {{1, 2}, {2, 3}, {2, 4}, {1, 3, 4}});
  auto b = BuildIncidenceMatrix(p);
  std::vector<std::vector<int>> expected = {
      {1, 0, 0, 1}, {1, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}};
  EXPECT_EQ(b.entries, expected);
}

TEST(IncidenceMatrixTest, SingletonsGiveIdentity) {
  for (int n = 1; n <= 6; ++n) {
    auto b = BuildIncidenceMatrix(SingletonPattern(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) EXPECT_EQ(b.at(i, j), i == j);
  }
}

TEST(IncidenceMatrixTest, WorkedExampleIsColumnPermutation) {
  auto joint = JoinPatterns(ExampleCollusion(), ExampleEavesdropping());
  auto b = BuildIncidenceMatrix(joint);
  // Columns as printed alongside the worked example.
  std::vector<std::vector<int>> listed = {{1, 1, 0, 0, 0},
                                          {1, 0, 1, 0, 0},
                                          {1, 0, 0, 1, 0},
                                          {0, 1, 1, 1, 0},
                                         {0, 0, 0, 0, 1}};
  auto columns = [](const std::vector<std::vector<int>>& m) {
    std::vector<std::vector<int>> cols(m[0].size());
    for (const auto& row : m)
      for (std::size_t j = 0; j < row.size(); ++j) cols[j].push_back(row[j]);
    std::sort(cols.begin(), cols.end());
    return cols;
  };
  EXPECT_EQ(columns(b.entries), columns(listed));
  // Canonical order: {5},{1,4},{2,4},{3,4},{1,2,3}.
  std::vector<std::vector<int>> canonical = {{0, 1, 0, 0, 1},
                                             {0, 0, 1, 0, 1},
                                             {0, 0, 0, 1, 1},
                                             {0, 1, 1, 1, 0},
                                             {1, 0, 0, 0, 0}};
  EXPECT_EQ(b.entries, canonical);
}

TEST(ValidateTest, FullSetRejected) {
  Pattern p{3, Sets({{1, 2, 3}}), PatternKind::kCollusion};
  auto d = Validate(p);
  EXPECT_TRUE(d.full_set_present);
  EXPECT_FALSE(d.ok());
  try {
    RequireValid(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFullSetPresent);
  }
}

TEST(ValidateTest, ValidPatterns) {
  EXPECT_TRUE(Validate(P(2, {{1}, {2}})).ok());
  auto pairs = P(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
  EXPECT_TRUE(Validate(pairs).ok());
  EXPECT_EQ(pairs, SymmetricPattern(4, 2, PatternKind::kCollusion));
}

TEST(ValidateTest, ReportsUncoveredAndNonMaximal) {
  Pattern p{4, Sets({{1, 2}, {1}, {1, 2}}), PatternKind::kCollusion};
  auto d = Validate(p);
  EXPECT_TRUE(d.ok());
  EXPECT_EQ(d.uncovered, (std::vector<int>{2, 3}));
  EXPECT_EQ(d.non_maximal, Sets({{1}, {1, 2}}));
  Pattern empty{3, {}, PatternKind::kCollusion};
  EXPECT_TRUE(Validate(empty).empty);
}

TEST(PatternFileTest, ParsesOneBasedIndices) {
  auto j = nlohmann::json::parse(
      R"({"n": 4, "collusion": [[1,2],[3,4]], "eavesdropping": [[1,2,3],[4]]})");
  auto f = PatternFileFromJson(j);
  EXPECT_EQ(f.n_servers, 4);
  EXPECT_EQ(f.collusion.sets, Sets({{1, 2}, {3, 4}}));
  EXPECT_EQ(f.eavesdropping.sets, Sets({{1, 2, 3}, {4}}));
  EXPECT_EQ(PatternFileToJson(f), j);
}

TEST(PatternFileTest, RejectsBadInput) {
  auto bad = [](const char* text) {
    try {
      PatternFileFromJson(nlohmann::json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(bad(R"({"n": 3, "collusion": [[0, 1]]})"), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(bad(R"({"n": 3, "collusion": [[4]]})"), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(bad(R"({"collusion": [[1]]})"), ErrorCode::kParseError);
  EXPECT_EQ(bad(R"({"n": 3, "collusion": [["a"]]})"), ErrorCode::kParseError);
  // Missing eavesdropping means the empty pattern.
  auto f = PatternFileFromJson(nlohmann::json::parse(R"({"n": 2, "collusion": [[1],[2]]})"));
  EXPECT_TRUE(f.eavesdropping.sets.empty());
}

// ---- properties over random patterns, N <= 6 ----

class PatternPropertyTest : public ::testing::Test {
 protected:
  std::mt19937_64 rng_{20240601};
  Pattern Random(int n, PatternKind kind = PatternKind::kJoint) {
    return RandomPattern(rng_, n, 2 * n, kind);
  }
  std::vector<ServerSet> RawSets(int n) {
    std::uniform_int_distribution<int> count(1, 8);
    std::uniform_int_distribution<std::uint32_t> mask(1, (1u << n) - 1);
    std::vector<ServerSet> out;
    for (int i = count(rng_); i > 0; --i) {
      ServerSet s;
      auto bits = mask(rng_);
      for (int k = 0; k < n; ++k)
        if (bits >> k & 1u) s.members.push_back(k);
      out.push_back(s);
    }
    return out;
  }
};

TEST_F(PatternPropertyTest, ReduceMaximalIsIdempotent) {
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + trial % 6;
    auto once = ReduceMaximal(RawSets(n), n, PatternKind::kJoint);
    EXPECT_EQ(ReduceMaximal(once.sets, n, PatternKind::kJoint), once);
  }
}

TEST_F(PatternPropertyTest, OutputSetsArePairwiseIncomparable) {
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + trial % 6;
    auto p = ReduceMaximal(RawSets(n), n, PatternKind::kJoint);
    auto b = BuildIncidenceMatrix(p);
    for (int a = 0; a < b.cols; ++a) {
      for (int c = 0; c < b.cols; ++c) {
        if (a == c) continue;
        bool contained = true;
        for (int r = 0; r < b.rows; ++r) contained &= !(b.at(r, a) && !b.at(r, c));
        EXPECT_FALSE(contained) << SetsToString(p.sets);
      }
    }
  }
}

TEST_F(PatternPropertyTest, ReducedSetsDominateInput) {
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 5;
    auto raw = RawSets(n);
    auto p = ReduceMaximal(raw, n, PatternKind::kJoint);
    for (const auto& s : raw) {
      bool covered = false;
      for (const auto& m : p.sets) covered |= s.IsSubsetOf(m);
      EXPECT_TRUE(covered);
    }
    for (const auto& m : p.sets)
      EXPECT_NE(std::find(raw.begin(), raw.end(), m), raw.end());
  }
}

TEST_F(PatternPropertyTest, JoinIsCommutativeAndAssociative) {
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + trial % 5;
    auto a = Random(n), b = Random(n), c = Random(n);
    EXPECT_EQ(JoinPatterns(a, b), JoinPatterns(b, a));
    EXPECT_EQ(JoinPatterns(JoinPatterns(a, b), c), JoinPatterns(a, JoinPatterns(b, c)));
  }
}

TEST_F(PatternPropertyTest, IncidenceRoundTrip) {
  for (int trial = 0; trial < 200; ++trial) {
    auto p = RandomJointPattern(rng_);
    EXPECT_EQ(PatternFromIncidence(BuildIncidenceMatrix(p)), p);
  }
}

TEST_F(PatternPropertyTest, RandomJointPatternsAreValidated) {
  for (int trial = 0; trial < 200; ++trial) {
    auto p = RandomJointPattern(rng_);
    auto d = Validate(p);
    EXPECT_TRUE(d.ok());
    EXPECT_TRUE(d.uncovered.empty());
    EXPECT_TRUE(d.non_maximal.empty());
  }
}

}  // namespace
}  // namespace spir
