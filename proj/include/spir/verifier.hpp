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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spir/error.hpp"
#include "spir/finite_field.hpp"
#include "spir/pattern.hpp"
#include "spir/protocol.hpp"
#include "spir/rational.hpp"

namespace spir {

enum class Constraint {
  kCorrectness,     // W_theta decodable from all answers
  kDbPrivacyUser,   // user learns nothing about other messages
  kUserPrivacy,     // colluding sets learn nothing about theta
  kDbPrivacyEve,    // eavesdropper learns nothing about W
};

inline const char* ConstraintName(Constraint c) {
  switch (c) {
    case Constraint::kCorrectness: return "correctness";
    case Constraint::kDbPrivacyUser: return "db_privacy_user";
    case Constraint::kUserPrivacy: return "user_privacy";
    case Constraint::kDbPrivacyEve: return "db_privacy_eve";
  }
  return "?";
}

enum class Method { kRank, kExhaustive, kSampled };

inline const char* MethodName(Method m) {
  switch (m) {
    case Method::kRank: return "rank";
    case Method::kExhaustive: return "exhaustive";
    case Method::kSampled: return "sampled";
  }
  return "?";
}

// One observed set: how many query/answer indices it sees and the rank of
// the matching generator columns.
struct SetCheck {
  ServerSet set;
  int observed = 0;
  int rank = 0;
  int limit = 0;  // k
  bool pass = false;
};

struct PrivacyCertificate {
  Constraint constraint = Constraint::kCorrectness;
  Method method = Method::kRank;
  std::string scope;          // e.g. "collusion", "eavesdropping"
  bool informational = false;  // reported, not required
  std::vector<SetCheck> sets;
  nlohmann::json witness = nlohmann::json::object();
  bool pass = false;
};

namespace detail {
inline SetCheck RankCheck(const SchemeParams& p, const ServerSet& set) {
  SetCheck c;
  c.set = set;
  c.limit = p.code_dim;
  auto indices = p.AssignedIndices(set);
  c.observed = static_cast<int>(indices.size());
  c.rank = indices.empty() ? 0 : Rank(p.grs.matrix.SelectColumns(indices));
  c.pass = c.observed <= p.code_dim && c.rank == c.observed;
  return c;
}

inline PrivacyCertificate RankCertificate(const SchemeParams& p,
                                          const Pattern& pattern,
                                          Constraint constraint,
                                          std::string scope) {
  PrivacyCertificate cert;
  cert.constraint = constraint;
  cert.method = Method::kRank;
  cert.scope = std::move(scope);
  cert.pass = true;
  for (const auto& s : pattern.sets) {
    cert.sets.push_back(RankCheck(p, s));
    cert.pass = cert.pass && cert.sets.back().pass;
  }
  return cert;
}
}  // namespace detail

/// Each colluding set sees at most k query vectors whose generator columns
/// are independent, so its block is uniform whatever theta is.
inline PrivacyCertificate VerifyUserPrivacyRank(const SchemeParams& p,
                                                const Pattern& pc) {
  return detail::RankCertificate(p, pc, Constraint::kUserPrivacy, "collusion");
}

/// The same check against the eavesdropping sets; not a model requirement.
inline PrivacyCertificate VerifyUserPrivacyAgainstEveRank(const SchemeParams& p,
                                                          const Pattern& pe) {
  auto cert = detail::RankCertificate(p, pe, Constraint::kUserPrivacy,
                                      "eavesdropping");
  cert.informational = true;
  return cert;
}

/// Each eavesdropped answer block is masked by at most k entries of s*G
/// whose generator columns are independent: the masks are jointly uniform.
inline PrivacyCertificate VerifyEvePrivacyRank(const SchemeParams& p,
                                               const Pattern& pe) {
  return detail::RankCertificate(p, pe, Constraint::kDbPrivacyEve,
                                 "eavesdropping");
}

/// Beyond W_theta the user decodes X_1..X_k. Their dependence on S is
/// s * G * [G ; 0 I]^-1; the certificate requires that map to be a bijection
/// from S onto the X coordinates.
inline PrivacyCertificate VerifyDbPrivacyUser(const SchemeParams& p) {
  PrivacyCertificate cert;
  cert.constraint = Constraint::kDbPrivacyUser;
  cert.method = Method::kRank;
  cert.scope = "user";
  if (p.code_dim < 1) {
    cert.pass = false;
    cert.witness["reason"] = "no common randomness (k = 0)";
    return cert;
  }
  FieldMatrix masks = Multiply(p.grs.matrix, DecodingMatrix(p));  // k x l_bar
  std::vector<int> side_cols, msg_cols;
  for (int j = 0; j < p.code_dim; ++j) side_cols.push_back(j);
  for (int j = p.code_dim; j < p.l_bar; ++j) msg_cols.push_back(j);
  int side_rank = Rank(masks.SelectColumns(side_cols));
  nlohmann::json map = nlohmann::json::object();
  for (int l = 0; l < p.code_dim; ++l) {
    nlohmann::json terms = nlohmann::json::array();
    for (int i = 0; i < p.code_dim; ++i) {
      auto c = masks.at(i, l);
      if (c.IsZero()) continue;
      std::string term = "S" + std::to_string(i + 1);
      if (c.value() != 1) term = std::to_string(c.value()) + "*" + term;
      terms.push_back(term);
    }
    map["X" + std::to_string(l + 1)] = terms;
  }
  bool message_unmasked =
      msg_cols.empty() || Rank(masks.SelectColumns(msg_cols)) == 0;
  cert.witness = {{"mask_map", map},
                  {"mask_rank", side_rank},
                  {"k", p.code_dim},
                  {"message_unmasked", message_unmasked}};
  cert.pass = side_rank == p.code_dim;
  return cert;
}

/// Runs `trials` sessions on random (W, theta); passes iff every session
/// decodes W_theta.
inline PrivacyCertificate VerifyCorrectnessSweep(const SchemeParams& p,
                                                 int trials,
                                                 std::uint64_t seed) {
  PrivacyCertificate cert;
  cert.constraint = Constraint::kCorrectness;
  cert.method = Method::kSampled;
  cert.scope = "user";
  Rng master(seed);
  std::uniform_int_distribution<int> theta_dist(1, p.n_messages);
  int failures = 0;
  for (int i = 0; i < trials; ++i) {
    auto w = RandomMessages(p, master);
    int theta = theta_dist(master);
    auto t = RunSession(p, w, theta, master());
    if (t.decoded != w.Message(theta)) ++failures;
  }
  cert.witness = {{"trials", trials}, {"seed", seed}, {"failures", failures}};
  cert.pass = failures == 0;
  return cert;
}

// ---- exhaustive enumeration ----

using DistributionTable = std::map<std::string, Rational>;

inline Rational TotalMass(const DistributionTable& t) {
  Rational s = 0;
  for (const auto& [k, v] : t) s += v;
  return s;
}

struct Observer {
  enum class Kind { kServers, kUser, kEavesdropper };
  Kind kind = Kind::kServers;
  ServerSet servers;  // for kServers / kEavesdropper
};

struct Comparison {
  enum class Kind { kThetaPair, kMessageMarginal };
  Kind kind = Kind::kThetaPair;
  int theta_a = 1;
  int theta_b = 2;  // unused for kMessageMarginal
};

struct ExhaustiveResult {
  // Theta pair: the two view tables. Marginal: the joint (view, secret)
  // table and the product of its marginals.
  DistributionTable first;
  DistributionTable second;
  std::uint64_t states = 0;  // per table
  bool pass = false;
};

inline constexpr std::uint64_t kDefaultBudget = 1u << 22;

// Number of (U, S, W) outcomes, or nullopt when above `limit`.
inline std::optional<std::uint64_t> EnumerationSize(const SchemeParams& p,
                                                    std::uint64_t limit) {
  int exponent = p.code_dim * p.VectorLength() + p.code_dim + p.VectorLength();
  std::uint64_t states = 1;
  for (int i = 0; i < exponent; ++i) {
    if (states > limit / p.field.modulus()) return std::nullopt;
    states *= p.field.modulus();
  }
  return states;
}

namespace detail {

inline void AppendValues(std::string& key, const FieldVector& v) {
  for (const auto& e : v) {
    key += std::to_string(e.value());
    key += ',';
  }
  key += '|';
}

// Calls fn(queries, common, messages, answers) for every (U, S, W).
template <typename Fn>
void ForEachOutcome(const SchemeParams& p, int theta, Fn&& fn) {
  const auto& f = p.field;
  int u_len = p.code_dim * p.VectorLength();
  int total = u_len + p.code_dim + p.VectorLength();
  std::vector<std::uint64_t> digits(total, 0);
  for (;;) {
    FieldMatrix u(p.code_dim, p.VectorLength(), f);
    for (int i = 0; i < u_len; ++i) {
      u.Set(i / p.VectorLength(), i % p.VectorLength(),
            FieldElement(digits[i], f.modulus()));
    }
    FieldVector s, w;
    for (int i = 0; i < p.code_dim; ++i) {
      s.emplace_back(digits[u_len + i], f.modulus());
    }
    for (int i = 0; i < p.VectorLength(); ++i) {
      w.emplace_back(digits[u_len + p.code_dim + i], f.modulus());
    }
    auto qs = BuildQueries(p, theta, u);
    auto cr = MakeCommonRandomness(p, s);
    auto store = MessagesFromStacked(p, w);
    FieldVector answers;
    for (int n = 0; n < p.n_servers; ++n) {
      auto a = AnswerServer(ViewOf(qs, n), store, cr);
      answers.insert(answers.end(), a.begin(), a.end());
    }
    fn(qs, cr, store, answers);

    int pos = 0;
    while (pos < total && ++digits[pos] == f.modulus()) digits[pos++] = 0;
    if (pos == total) break;
  }
}

inline std::string ObservedBlock(const SchemeParams& p, const ServerSet& set,
                                 const QuerySet& qs, const FieldVector& answers) {
  std::string key;
  for (int j : p.AssignedIndices(set)) {
    AppendValues(key, qs.query_vectors[j]);
    key += std::to_string(answers[j].value());
    key += ';';
  }
  return key;
}

inline DistributionTable ProductOfMarginals(const DistributionTable& joint) {
  std::map<std::string, Rational> view, secret;
  for (const auto& [k, v] : joint) {
    auto cut = k.find('#');
    view[k.substr(0, cut)] += v;
    secret[k.substr(cut + 1)] += v;
  }
  DistributionTable product;
  for (const auto& [a, pa] : view) {
    for (const auto& [b, pb] : secret) product[a + "#" + b] = pa * pb;
  }
  return product;
}

}  // namespace detail

/// Enumerates every (U, S, W) with exact uniform weight and compares
/// observer views. Theta pair: tables for theta_a and theta_b must be equal;
/// for a server set the view is (Q_T, A_T, W, S). Marginal: the view must
/// be independent of the secret (W_other for the user, all of W for an
/// eavesdropper), checked as exact product-form factorization.
inline ExhaustiveResult ExhaustivePrivacy(const SchemeParams& p,
                                          const Observer& observer,
                                          const Comparison& cmp,
                                          std::uint64_t budget = kDefaultBudget) {
  auto states = EnumerationSize(p, budget);
  SPIR_ENFORCE(states.has_value(), ErrorCode::kBudgetExceeded,
               "enumeration exceeds budget " + std::to_string(budget));
  Rational weight(1, *states);

  if (cmp.kind == Comparison::Kind::kThetaPair) {
    SPIR_ENFORCE(observer.kind != Observer::Kind::kUser,
                 ErrorCode::kInvalidArgument, "the user knows theta");
    auto table_for = [&](int theta) {
      DistributionTable t;
      detail::ForEachOutcome(p, theta, [&](const QuerySet& qs,
                                           const CommonRandomness& cr,
                                           const MessageStore& w,
                                           const FieldVector& answers) {
        std::string key = detail::ObservedBlock(p, observer.servers, qs, answers);
        if (observer.kind == Observer::Kind::kServers) {
          key += "W:";
          detail::AppendValues(key, w.Stacked());
          key += "S:";
          detail::AppendValues(key, cr.s);
        }
        t[key] += weight;
      });
      return t;
    };
    ExhaustiveResult r;
    r.first = table_for(cmp.theta_a);
    r.second = table_for(cmp.theta_b);
    r.states = *states;
    r.pass = r.first == r.second;
    return r;
  }

  SPIR_ENFORCE(observer.kind != Observer::Kind::kServers,
               ErrorCode::kInvalidArgument,
               "message-marginal mode needs the user or an eavesdropper");
  int theta = cmp.theta_a;
  ExhaustiveResult r;
  detail::ForEachOutcome(p, theta, [&](const QuerySet& qs,
                                       const CommonRandomness&,
                                       const MessageStore& w,
                                       const FieldVector& answers) {
    std::string key;
    FieldVector secret;
    if (observer.kind == Observer::Kind::kUser) {
      for (const auto& q : qs.query_vectors) detail::AppendValues(key, q);
      detail::AppendValues(key, answers);
      for (int t = 1; t <= p.n_messages; ++t) {
        if (t == theta) continue;
        auto m = w.Message(t);
        secret.insert(secret.end(), m.begin(), m.end());
      }
    } else {
      key = detail::ObservedBlock(p, observer.servers, qs, answers);
      secret = w.Stacked();
    }
    key += '#';
    detail::AppendValues(key, secret);
    r.first[key] += weight;
  });
  r.second = detail::ProductOfMarginals(r.first);
  r.states = *states;
  // Entries of the product absent from the joint have joint mass zero.
  r.pass = r.first == r.second;
  return r;
}

inline PrivacyCertificate ExhaustiveCertificate(const SchemeParams& p,
                                                Constraint constraint,
                                                const Observer& observer,
                                                const Comparison& cmp,
                                                std::uint64_t budget) {
  auto r = ExhaustivePrivacy(p, observer, cmp, budget);
  PrivacyCertificate cert;
  cert.constraint = constraint;
  cert.method = Method::kExhaustive;
  switch (observer.kind) {
    case Observer::Kind::kUser: cert.scope = "user"; break;
    case Observer::Kind::kServers:
      cert.scope = "servers " + SetsToString({observer.servers});
      break;
    case Observer::Kind::kEavesdropper:
      cert.scope = "eve " + SetsToString({observer.servers});
      break;
  }
  cert.pass = r.pass && TotalMass(r.first) == 1 && TotalMass(r.second) == 1;
  cert.witness = {{"states", r.states},
                  {"entries_first", r.first.size()},
                  {"entries_second", r.second.size()},
                  {"mass_first", ToString(TotalMass(r.first))},
                  {"mass_second", ToString(TotalMass(r.second))}};
  return cert;
}

/// Decodes every (W, theta, U, S) outcome.
inline PrivacyCertificate VerifyCorrectnessExhaustive(
    const SchemeParams& p, std::uint64_t budget = kDefaultBudget) {
  auto states = EnumerationSize(p, budget);
  SPIR_ENFORCE(states.has_value(), ErrorCode::kBudgetExceeded,
               "enumeration exceeds budget " + std::to_string(budget));
  std::uint64_t failures = 0, checked = 0;
  for (int theta = 1; theta <= p.n_messages; ++theta) {
    detail::ForEachOutcome(p, theta, [&](const QuerySet&, const CommonRandomness&,
                                         const MessageStore& w,
                                         const FieldVector& answers) {
      ++checked;
      if (Decode(p, answers).message != w.Message(theta)) ++failures;
    });
  }
  PrivacyCertificate cert;
  cert.constraint = Constraint::kCorrectness;
  cert.method = Method::kExhaustive;
  cert.scope = "user";
  cert.witness = {{"outcomes", checked}, {"failures", failures}};
  cert.pass = failures == 0;
  return cert;
}

/// Moves one query from a server outside joint set `set_index` to the set's
/// first member, so that set sees k + 1 indices. Nullopt when no server
/// outside the set holds a query.
inline std::optional<SchemeParams> OverloadJointSet(const SchemeParams& p,
                                                    int set_index) {
  const auto& set = p.joint.sets.at(set_index);
  for (int n = 0; n < p.n_servers; ++n) {
    if (set.Contains(n) || p.counts[n] == 0) continue;
    SchemeParams t = p;
    --t.counts[n];
    ++t.counts[set.members.front()];
    return t;
  }
  return std::nullopt;
}

inline nlohmann::json CertificateToJson(const PrivacyCertificate& c) {
  nlohmann::json sets = nlohmann::json::array();
  for (const auto& s : c.sets) {
    sets.push_back({{"set", SetToJson(s.set)},
                    {"observed", s.observed},
                    {"rank", s.rank},
                    {"limit", s.limit},
                    {"pass", s.pass}});
  }
  return {{"constraint", ConstraintName(c.constraint)},
          {"method", MethodName(c.method)},
          {"scope", c.scope},
          {"informational", c.informational},
          {"sets", sets},
          {"witness", c.witness},
          {"verdict", c.pass ? "pass" : "fail"}};
}

}  // namespace spir
