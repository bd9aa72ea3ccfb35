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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spir/error.hpp"
#include "spir/exact_lp.hpp"
#include "spir/pattern.hpp"
#include "spir/rational.hpp"

namespace spir {

struct CapacityReport {
  Rational f_star = 0;
  Rational capacity = 0;
  Rational conditional_capacity = 0;  // 1 - 1/F*, the value when rho suffices
  Rational rho_threshold = 0;         // 1 / (F* - 1)
  std::optional<Rational> rho_given;
  bool achievable = false;
  Pattern joint_pattern;
  std::vector<int> added_singletons;  // 0-based servers coverage completion added
  std::vector<Rational> y_star;
  std::vector<int> basis;
  std::vector<std::string> notes;
};

namespace detail {
inline void RequireNoFullSet(const Pattern& p) {
  SPIR_ENFORCE(!ContainsFullSet(p), ErrorCode::kFullSetPresent,
               std::string(PatternKindName(p.kind)) +
                   " pattern contains the set of all servers: no scheme can "
                   "protect both user privacy and database privacy");
}
}  // namespace detail

/// Joint pattern, coverage completion, LP1, then the capacity formula.
/// Both patterns may be non-maximal; they are normalized first.
inline CapacityReport SpirCapacity(const Pattern& pc, const Pattern& pe,
                                   const std::optional<Rational>& rho) {
  SPIR_ENFORCE(!pc.sets.empty(), ErrorCode::kEmptyPattern,
               "a collusion pattern must list at least the singletons");
  detail::RequireNoFullSet(pc);
  detail::RequireNoFullSet(pe);
  SPIR_ENFORCE(!rho || *rho >= 0, ErrorCode::kInvalidArgument,
               "rho must be non-negative");
  Pattern joint = JoinPatterns(pc, pe);

  CapacityReport r;
  r.added_singletons = UncoveredServers(joint);
  r.joint_pattern = CompleteCoverage(joint);
  detail::RequireNoFullSet(r.joint_pattern);
  if (!r.added_singletons.empty()) {
    r.notes.push_back("added singleton sets for servers covered by no pattern set");
  }

  auto lp = SolveLp1(BuildIncidenceMatrix(r.joint_pattern));
  r.f_star = lp.value;
  r.y_star = lp.vector;
  r.basis = lp.basis;
  SPIR_ENFORCE(r.f_star > 1, ErrorCode::kFullSetPresent,
               "F* = " + ToString(r.f_star) + " is not above 1");
  r.conditional_capacity = 1 - 1 / r.f_star;
  r.rho_threshold = 1 / (r.f_star - 1);
  r.rho_given = rho;
  if (rho) {
    r.achievable = *rho >= r.rho_threshold;
  } else {
    r.achievable = true;
    r.notes.push_back("no rho given: capacity assumes rho >= threshold");
  }
  r.capacity = r.achievable ? r.conditional_capacity : Rational(0);
  r.notes.push_back("model assumes K >= 2 messages; capacity does not depend on K");
  return r;
}

/// Any T servers collude, any E are eavesdropped; built from the symmetric
/// patterns and solved through the LP.
inline Rational TEspirCapacity(int n_servers, int t, int e, const Rational& rho) {
  SPIR_ENFORCE(n_servers >= 2, ErrorCode::kInvalidArgument, "need N >= 2");
  SPIR_ENFORCE(t >= 1 && e >= 1 && t <= n_servers && e <= n_servers,
               ErrorCode::kInvalidArgument, "need 1 <= T, E <= N");
  SPIR_ENFORCE(t < n_servers && e < n_servers, ErrorCode::kFullSetPresent,
               "T = N or E = N puts the set of all servers in a pattern");
  auto pc = SymmetricPattern(n_servers, t, PatternKind::kCollusion);
  auto pe = SymmetricPattern(n_servers, e, PatternKind::kEavesdropping);
  return SpirCapacity(pc, pe, rho).capacity;
}

/// PIR under an eavesdropping pattern alone: the collusion side is the
/// singleton pattern (user privacy at every single server). Database
/// privacy against the user then comes at no extra download cost.
inline CapacityReport PirEavesdropReport(const Pattern& pe,
                                         const std::optional<Rational>& rho) {
  auto pc = SingletonPattern(pe.n_servers, PatternKind::kCollusion);
  auto uncovered = UncoveredServers(pe);
  auto report = SpirCapacity(pc, pe, rho);
  if (!uncovered.empty()) {
    report.notes.push_back(
        "eavesdropping pattern alone leaves servers uncovered; its own LP1 "
        "would be unbounded, the singleton collusion constraints were joined");
  }
  report.notes.push_back("database privacy against the user is free here");
  return report;
}

inline Rational PirEavesdropCapacity(const Pattern& pe, const Rational& rho) {
  return PirEavesdropReport(pe, rho).capacity;
}

inline nlohmann::json CapacityReportToJson(const CapacityReport& r) {
  nlohmann::json y = nlohmann::json::array();
  for (const auto& v : r.y_star) y.push_back(RationalToJson(v));
  nlohmann::json added = nlohmann::json::array();
  for (int n : r.added_singletons) added.push_back(n + 1);
  return {{"n_servers", r.joint_pattern.n_servers},
          {"joint_pattern", SetsToJson(r.joint_pattern.sets)},
          {"added_singletons", added},
          {"f_star", RationalToJson(r.f_star)},
          {"y_star", y},
          {"capacity", RationalToJson(r.capacity)},
          {"conditional_capacity", RationalToJson(r.conditional_capacity)},
          {"rho_threshold", RationalToJson(r.rho_threshold)},
          {"rho_given", r.rho_given ? RationalToJson(*r.rho_given) : nlohmann::json()},
          {"achievable", r.achievable},
          {"notes", r.notes}};
}

}  // namespace spir
