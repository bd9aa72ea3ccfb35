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

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "spir/error.hpp"

namespace spir {

// Sorted, duplicate-free server indices. 0-based; the JSON layer converts
// from and to the 1-based indices users write.
struct ServerSet {
  std::vector<int> members;

  bool Contains(int server) const {
    return std::binary_search(members.begin(), members.end(), server);
  }
  bool IsSubsetOf(const ServerSet& other) const {
    return std::includes(other.members.begin(), other.members.end(),
                         members.begin(), members.end());
  }
  std::size_t size() const { return members.size(); }

  friend bool operator==(const ServerSet&, const ServerSet&) = default;
};

// Canonical order: cardinality first, then lexicographic.
inline bool CanonicalLess(const ServerSet& a, const ServerSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.members < b.members;
}

inline ServerSet MakeServerSet(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return ServerSet{std::move(members)};
}

enum class PatternKind { kCollusion, kEavesdropping, kJoint };

inline const char* PatternKindName(PatternKind kind) {
  switch (kind) {
    case PatternKind::kCollusion: return "collusion";
    case PatternKind::kEavesdropping: return "eavesdropping";
    case PatternKind::kJoint: return "joint";
  }
  return "?";
}

struct Pattern {
  int n_servers = 0;
  std::vector<ServerSet> sets;
  PatternKind kind = PatternKind::kJoint;

  std::size_t size() const { return sets.size(); }
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

// Column m is the 0/1 indicator of set m over the N servers.
struct IncidenceMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<int>> entries;  // rows x cols

  int at(int n, int m) const { return entries[n][m]; }
  friend bool operator==(const IncidenceMatrix&,
                         const IncidenceMatrix&) = default;
};

namespace detail {
inline void CheckSet(const ServerSet& set, int n_servers) {
  SPIR_ENFORCE(!set.members.empty(), ErrorCode::kEmptySet,
               "server sets must be non-empty");
  for (int s : set.members) {
    SPIR_ENFORCE(s >= 0 && s < n_servers, ErrorCode::kIndexOutOfRange,
                 "server " + std::to_string(s + 1) + " outside [1.." +
                     std::to_string(n_servers) + "]");
  }
}
}  // namespace detail

/// Keeps exactly the inclusion-maximal sets, deduplicated, in canonical
/// order.
inline Pattern ReduceMaximal(std::vector<ServerSet> sets, int n_servers,
                             PatternKind kind) {
  SPIR_ENFORCE(n_servers >= 1, ErrorCode::kInvalidArgument,
               "pattern needs at least one server");
  SPIR_ENFORCE(!(sets.empty() && kind == PatternKind::kCollusion),
               ErrorCode::kEmptyPattern,
               "a collusion pattern must list at least the singletons");
  for (auto& s : sets) {
    s = MakeServerSet(std::move(s.members));
    detail::CheckSet(s, n_servers);
  }
  std::sort(sets.begin(), sets.end(), CanonicalLess);
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());

  std::vector<ServerSet> maximal;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool dominated = false;
    // Only a strictly larger set can contain sets[i] after dedup.
    for (std::size_t j = i + 1; j < sets.size() && !dominated; ++j) {
      dominated = sets[j].size() > sets[i].size() && sets[i].IsSubsetOf(sets[j]);
    }
    if (!dominated) maximal.push_back(sets[i]);
  }
  return Pattern{n_servers, std::move(maximal), kind};
}

inline Pattern MakePattern(int n_servers,
                           const std::vector<std::vector<int>>& sets,
                           PatternKind kind) {
  std::vector<ServerSet> s;
  s.reserve(sets.size());
  for (const auto& m : sets) s.push_back(MakeServerSet(m));
  return ReduceMaximal(std::move(s), n_servers, kind);
}

inline Pattern JoinPatterns(const Pattern& pc, const Pattern& pe) {
  SPIR_ENFORCE(pc.n_servers == pe.n_servers, ErrorCode::kMismatchedServers,
               "patterns disagree on N: " + std::to_string(pc.n_servers) +
                   " vs " + std::to_string(pe.n_servers));
  std::vector<ServerSet> all = pc.sets;
  all.insert(all.end(), pe.sets.begin(), pe.sets.end());
  return ReduceMaximal(std::move(all), pc.n_servers, PatternKind::kJoint);
}

inline std::vector<int> UncoveredServers(const Pattern& p) {
  std::vector<bool> covered(p.n_servers, false);
  for (const auto& s : p.sets) {
    for (int m : s.members) {
      if (m >= 0 && m < p.n_servers) covered[m] = true;
    }
  }
  std::vector<int> out;
  for (int n = 0; n < p.n_servers; ++n) {
    if (!covered[n]) out.push_back(n);
  }
  return out;
}

/// Adds {n} for every server n no set mentions.
inline Pattern CompleteCoverage(const Pattern& p) {
  std::vector<ServerSet> sets = p.sets;
  for (int n : UncoveredServers(p)) sets.push_back(ServerSet{{n}});
  return ReduceMaximal(std::move(sets), p.n_servers, p.kind);
}

inline bool ContainsFullSet(const Pattern& p) {
  for (const auto& s : p.sets) {
    if (static_cast<int>(s.size()) == p.n_servers) return true;
  }
  return false;
}

inline IncidenceMatrix BuildIncidenceMatrix(const Pattern& p) {
  IncidenceMatrix b;
  b.rows = p.n_servers;
  b.cols = static_cast<int>(p.sets.size());
  b.entries.assign(b.rows, std::vector<int>(b.cols, 0));
  for (int m = 0; m < b.cols; ++m) {
    for (int n : p.sets[m].members) b.entries[n][m] = 1;
  }
  return b;
}

inline Pattern PatternFromIncidence(const IncidenceMatrix& b,
                                    PatternKind kind = PatternKind::kJoint) {
  std::vector<ServerSet> sets;
  for (int m = 0; m < b.cols; ++m) {
    ServerSet s;
    for (int n = 0; n < b.rows; ++n) {
      if (b.at(n, m)) s.members.push_back(n);
    }
    sets.push_back(std::move(s));
  }
  return ReduceMaximal(std::move(sets), b.rows, kind);
}

struct PatternDiagnostics {
  bool empty = false;
  bool full_set_present = false;
  std::vector<int> uncovered;          // 0-based
  std::vector<ServerSet> non_maximal;  // auto-fixable by ReduceMaximal
  std::vector<std::string> notes;

  bool ok() const { return !empty && !full_set_present; }
};

/// Reports, without throwing, what is wrong with `p`. Uncovered servers
/// and non-maximal sets are informational; a full set or an empty
/// collusion pattern makes the pattern unusable.
inline PatternDiagnostics Validate(const Pattern& p) {
  PatternDiagnostics d;
  d.empty = p.sets.empty() && p.kind == PatternKind::kCollusion;
  if (d.empty) d.notes.push_back("collusion pattern is empty");
  for (const auto& s : p.sets) {
    detail::CheckSet(MakeServerSet(s.members), p.n_servers);
  }
  d.full_set_present = ContainsFullSet(p);
  if (d.full_set_present) {
    d.notes.push_back(
        std::string(PatternKindName(p.kind)) +
        " pattern contains the set of all servers: no scheme can protect "
        "both user privacy and database privacy, capacity is zero");
  }
  d.uncovered = UncoveredServers(p);
  for (std::size_t i = 0; i < p.sets.size(); ++i) {
    for (std::size_t j = 0; j < p.sets.size(); ++j) {
      if (i == j) continue;
      bool sub = p.sets[i].IsSubsetOf(p.sets[j]);
      // Duplicates: report only the later copy.
      if (sub && (p.sets[i].size() < p.sets[j].size() || i > j)) {
        d.non_maximal.push_back(p.sets[i]);
        break;
      }
    }
  }
  return d;
}

/// Throws FullSetPresent / EmptyPattern for unusable patterns.
inline void RequireValid(const Pattern& p) {
  auto d = Validate(p);
  SPIR_ENFORCE(!d.empty, ErrorCode::kEmptyPattern, d.notes.front());
  SPIR_ENFORCE(!d.full_set_present, ErrorCode::kFullSetPresent,
               d.notes.back());
}

inline Pattern SingletonPattern(int n_servers,
                                PatternKind kind = PatternKind::kCollusion) {
  std::vector<ServerSet> sets;
  for (int n = 0; n < n_servers; ++n) sets.push_back(ServerSet{{n}});
  return ReduceMaximal(std::move(sets), n_servers, kind);
}

// Every subset of [0, N) of the given size.
inline Pattern SymmetricPattern(int n_servers, int set_size,
                                PatternKind kind) {
  SPIR_ENFORCE(set_size >= 1 && set_size <= n_servers,
               ErrorCode::kInvalidArgument, "set size outside [1..N]");
  std::vector<ServerSet> sets;
  std::vector<bool> pick(n_servers, false);
  std::fill(pick.begin(), pick.begin() + set_size, true);
  do {
    ServerSet s;
    for (int n = 0; n < n_servers; ++n) {
      if (pick[n]) s.members.push_back(n);
    }
    sets.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return ReduceMaximal(std::move(sets), n_servers, kind);
}

// ---- 1-based JSON boundary ----

inline nlohmann::json SetToJson(const ServerSet& s) {
  nlohmann::json out = nlohmann::json::array();
  for (int m : s.members) out.push_back(m + 1);
  return out;
}

inline nlohmann::json SetsToJson(const std::vector<ServerSet>& sets) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : sets) out.push_back(SetToJson(s));
  return out;
}

inline std::string SetsToString(const std::vector<ServerSet>& sets) {
  std::string out = "{";
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += ",";
    out += "{";
    for (std::size_t j = 0; j < sets[i].members.size(); ++j) {
      if (j) out += ",";
      out += std::to_string(sets[i].members[j] + 1);
    }
    out += "}";
  }
  return out + "}";
}

inline std::vector<ServerSet> SetsFromJson(const nlohmann::json& j,
                                           int n_servers) {
  SPIR_ENFORCE(j.is_array(), ErrorCode::kParseError,
               "pattern must be an array of server lists");
  std::vector<ServerSet> sets;
  for (const auto& raw : j) {
    SPIR_ENFORCE(raw.is_array(), ErrorCode::kParseError,
                 "each set must be an array of server indices");
    std::vector<int> members;
    for (const auto& v : raw) {
      SPIR_ENFORCE(v.is_number_integer(), ErrorCode::kParseError,
                   "server indices must be integers");
      int idx = v.get<int>();
      SPIR_ENFORCE(idx >= 1 && idx <= n_servers, ErrorCode::kIndexOutOfRange,
                   "server " + std::to_string(idx) + " outside [1.." +
                       std::to_string(n_servers) + "]");
      members.push_back(idx - 1);
    }
    sets.push_back(MakeServerSet(std::move(members)));
  }
  return sets;
}

// The pattern file: {"n": N, "collusion": [[...]], "eavesdropping": [[...]]}.
// Sets are kept as written; Validate reports what normalization would do.
struct PatternFile {
  int n_servers = 0;
  Pattern collusion;
  Pattern eavesdropping;
};

inline PatternFile PatternFileFromJson(const nlohmann::json& j) {
  SPIR_ENFORCE(j.is_object() && j.contains("n") && j.contains("collusion"),
               ErrorCode::kParseError,
               "pattern file needs \"n\" and \"collusion\"");
  SPIR_ENFORCE(j.at("n").is_number_integer() && j.at("n").get<int>() >= 1,
               ErrorCode::kParseError, "\"n\" must be a positive integer");
  PatternFile f;
  f.n_servers = j.at("n").get<int>();
  f.collusion = Pattern{f.n_servers, SetsFromJson(j.at("collusion"), f.n_servers),
                        PatternKind::kCollusion};
  nlohmann::json eve = j.value("eavesdropping", nlohmann::json::array());
  f.eavesdropping = Pattern{f.n_servers, SetsFromJson(eve, f.n_servers),
                            PatternKind::kEavesdropping};
  return f;
}

inline nlohmann::json PatternFileToJson(const PatternFile& f) {
  return {{"n", f.n_servers},
          {"collusion", SetsToJson(f.collusion.sets)},
          {"eavesdropping", SetsToJson(f.eavesdropping.sets)}};
}

}  // namespace spir
