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

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "spir/error.hpp"
#include "spir/exact_lp.hpp"
#include "spir/finite_field.hpp"
#include "spir/grs_code.hpp"
#include "spir/pattern.hpp"
#include "spir/rational.hpp"

namespace spir {

using Rng = std::mt19937_64;

// Everything the retrieval scheme needs once a packing vector y is fixed.
// Server n receives query indices [BlockStart(n), BlockStart(n) + counts[n]).
struct SchemeParams {
  int n_servers = 0;
  int n_messages = 0;        // K
  std::vector<Rational> y;   // LP1-feasible packing vector
  Rational f = 0;            // sum of y
  int l_bar = 0;             // number of query vectors / answers
  int msg_len = 0;           // L = l_bar - k
  int code_dim = 0;          // k = l_bar / f
  PrimeField field{2};
  std::vector<int> counts;   // queries per server
  GrsGenerator grs;
  Pattern joint;

  int VectorLength() const { return n_messages * msg_len; }

  int BlockStart(int server) const {
    int start = 0;
    for (int n = 0; n < server; ++n) start += counts[n];
    return start;
  }

  std::vector<int> AssignedIndices(int server) const {
    std::vector<int> out;
    int start = BlockStart(server);
    for (int j = 0; j < counts[server]; ++j) out.push_back(start + j);
    return out;
  }

  std::vector<int> AssignedIndices(const ServerSet& set) const {
    std::vector<int> out;
    for (int n : set.members) {
      auto block = AssignedIndices(n);
      out.insert(out.end(), block.begin(), block.end());
    }
    return out;
  }

  // Common randomness relative to message size, k / L.
  Rational Rho() const { return Rational(code_dim, msg_len); }
};

struct PlanOptions {
  // Explicit prime modulus (must be >= l_bar); default is ChooseField.
  std::optional<std::uint64_t> modulus;
};

/// Smallest blocklength making l_bar / f and l_bar * y_n / f integral.
inline BigInt MinimalBlocklength(const std::vector<Rational>& y,
                                 const Rational& f) {
  BigInt l_bar = Denominator(Rational(1) / f);
  for (const auto& v : y) l_bar = Lcm(l_bar, Denominator(v / f));
  return l_bar;
}

inline SchemeParams PlanScheme(const std::vector<Rational>& y,
                               const Rational& f, int n_messages,
                               const Pattern& joint,
                               const PlanOptions& options = {}) {
  SPIR_ENFORCE(n_messages >= 2, ErrorCode::kInvalidArgument,
               "the model needs K >= 2 messages");
  SPIR_ENFORCE(static_cast<int>(y.size()) == joint.n_servers,
               ErrorCode::kInvalidArgument, "y must have one entry per server");
  SPIR_ENFORCE(Sum(y) == f, ErrorCode::kInvalidArgument,
               "f = " + ToString(f) + " is not the sum of y");
  SPIR_ENFORCE(f > 1, ErrorCode::kFNotGreaterThanOne,
               "F = " + ToString(f) + " leaves no room for a positive message length");
  SPIR_ENFORCE(IsLp1Feasible(BuildIncidenceMatrix(joint), y),
               ErrorCode::kInfeasibleY,
               "y violates B'y <= 1 or y >= 0 for the joint pattern");

  BigInt l_bar_big = MinimalBlocklength(y, f);
  SPIR_ENFORCE(l_bar_big <= 4096, ErrorCode::kInvalidArgument,
               "blocklength " + l_bar_big.str() + " is too large to simulate");

  SchemeParams p;
  p.n_servers = joint.n_servers;
  p.n_messages = n_messages;
  p.y = y;
  p.f = f;
  p.joint = joint;
  p.l_bar = l_bar_big.convert_to<int>();
  Rational k = Rational(p.l_bar) / f;
  p.code_dim = Numerator(k).convert_to<int>();
  p.msg_len = p.l_bar - p.code_dim;
  for (const auto& v : y) {
    Rational c = v / f * p.l_bar;
    p.counts.push_back(Numerator(c).convert_to<int>());
  }
  if (options.modulus) {
    p.field = PrimeField(*options.modulus);
  } else {
    p.field = ChooseField(static_cast<std::uint64_t>(p.l_bar));
  }
  p.grs = BuildGrs(p.l_bar, p.code_dim, p.field);
  bool mds = BinomialCount(p.l_bar, p.code_dim) <= 200000
                 ? CheckMds(p.grs)
                 : CheckMdsStructural(p.grs);
  SPIR_ENFORCE(mds, ErrorCode::kSingularStack, "GRS generator is not MDS");
  return p;
}

/// Plans from the LP1 optimum of `joint`.
inline SchemeParams PlanFromLp(const Pattern& joint, int n_messages,
                               const PlanOptions& options = {}) {
  auto lp = SolveLp1(BuildIncidenceMatrix(joint));
  return PlanScheme(lp.vector, lp.value, n_messages, joint, options);
}

inline Rational MeasureRate(const SchemeParams& p) {
  return Rational(p.msg_len, p.l_bar);
}

// K x L; row t is message t (0-based).
struct MessageStore {
  FieldMatrix w;

  // The stacked vector (W_1^1 .. W_1^L, ..., W_K^1 .. W_K^L).
  FieldVector Stacked() const {
    FieldVector out;
    for (int t = 0; t < w.rows(); ++t) {
      for (int j = 0; j < w.cols(); ++j) out.push_back(w.at(t, j));
    }
    return out;
  }
  FieldVector Message(int theta) const { return w.Row(theta - 1); }
};

inline MessageStore RandomMessages(const SchemeParams& p, Rng& rng) {
  MessageStore m{FieldMatrix(p.n_messages, p.msg_len, p.field)};
  for (int t = 0; t < p.n_messages; ++t) {
    for (int j = 0; j < p.msg_len; ++j) m.w.Set(t, j, p.field.Uniform(rng));
  }
  return m;
}

inline MessageStore MessagesFromStacked(const SchemeParams& p,
                                        const FieldVector& stacked) {
  SPIR_ENFORCE(static_cast<int>(stacked.size()) == p.VectorLength(),
               ErrorCode::kInvalidArgument, "stacked message length != K*L");
  MessageStore m{FieldMatrix(p.n_messages, p.msg_len, p.field)};
  for (int t = 0; t < p.n_messages; ++t) {
    for (int j = 0; j < p.msg_len; ++j) m.w.Set(t, j, stacked[t * p.msg_len + j]);
  }
  return m;
}

struct QuerySet {
  int theta = 1;                          // 1-based, user-private
  FieldMatrix randomness{0, 0, PrimeField(2)};  // U_1..U_k as rows, user-private
  std::vector<FieldVector> query_vectors;  // l_bar vectors of length K*L
  std::vector<std::pair<int, int>> assignment;  // per server: (start, count)
};

/// Query matrix [U_1 .. U_k] G plus the unit-vector offset on the last L
/// columns. `u` holds U_l as its rows (k x K*L).
inline QuerySet BuildQueries(const SchemeParams& p, int theta,
                             const FieldMatrix& u) {
  SPIR_ENFORCE(theta >= 1 && theta <= p.n_messages, ErrorCode::kThetaOutOfRange,
               "theta " + std::to_string(theta) + " outside [1.." +
                   std::to_string(p.n_messages) + "]");
  SPIR_ENFORCE(u.rows() == p.code_dim && u.cols() == p.VectorLength(),
               ErrorCode::kInvalidArgument, "randomness must be k x K*L");
  QuerySet qs;
  qs.theta = theta;
  qs.randomness = u;
  const FieldMatrix& g = p.grs.matrix;
  int offset_cols = p.l_bar - p.msg_len;
  for (int j = 0; j < p.l_bar; ++j) {
    FieldVector q(p.VectorLength(), p.field.Zero());
    for (int l = 0; l < p.code_dim; ++l) {
      FieldElement coef = g.at(l, j);
      if (coef.IsZero()) continue;
      for (int r = 0; r < p.VectorLength(); ++r) q[r] += u.at(l, r) * coef;
    }
    if (j >= offset_cols) {
      int unit = (theta - 1) * p.msg_len + (j - offset_cols);
      q[unit] += p.field.One();
    }
    qs.query_vectors.push_back(std::move(q));
  }
  for (int n = 0; n < p.n_servers; ++n) {
    qs.assignment.emplace_back(p.BlockStart(n), p.counts[n]);
  }
  return qs;
}

inline QuerySet GenerateQueries(const SchemeParams& p, int theta, Rng& rng) {
  SPIR_ENFORCE(theta >= 1 && theta <= p.n_messages, ErrorCode::kThetaOutOfRange,
               "theta " + std::to_string(theta) + " outside [1.." +
                   std::to_string(p.n_messages) + "]");
  FieldMatrix u(p.code_dim, p.VectorLength(), p.field);
  for (int l = 0; l < u.rows(); ++l) {
    for (int r = 0; r < u.cols(); ++r) u.Set(l, r, p.field.Uniform(rng));
  }
  return BuildQueries(p, theta, u);
}

struct CommonRandomness {
  FieldVector s;      // k symbols shared by all servers
  FieldVector s_bar;  // s * G, one mask per answer
};

inline CommonRandomness MakeCommonRandomness(const SchemeParams& p,
                                             const FieldVector& s) {
  SPIR_ENFORCE(static_cast<int>(s.size()) == p.code_dim,
               ErrorCode::kInvalidArgument, "common randomness must have k symbols");
  return CommonRandomness{s, Multiply(s, p.grs.matrix)};
}

inline CommonRandomness SampleCommonRandomness(const SchemeParams& p, Rng& rng) {
  FieldVector s;
  for (int l = 0; l < p.code_dim; ++l) s.push_back(p.field.Uniform(rng));
  return MakeCommonRandomness(p, s);
}

// What one server receives: its own block of query vectors, nothing else.
struct ServerView {
  int server = 0;
  int first_index = 0;
  std::vector<FieldVector> queries;
};

inline ServerView ViewOf(const QuerySet& qs, int server) {
  SPIR_ENFORCE(server >= 0 && server < static_cast<int>(qs.assignment.size()),
               ErrorCode::kIndexOutOfRange, "no such server");
  auto [start, count] = qs.assignment[server];
  ServerView v{server, start, {}};
  for (int j = 0; j < count; ++j) v.queries.push_back(qs.query_vectors[start + j]);
  return v;
}

/// A_j = Q_j' W + S_bar_j for each query index j in the view.
inline FieldVector AnswerServer(const ServerView& view, const MessageStore& w,
                                const CommonRandomness& cr) {
  FieldVector stacked = w.Stacked();
  FieldVector out;
  for (std::size_t i = 0; i < view.queries.size(); ++i) {
    out.push_back(Dot(view.queries[i], stacked) +
                  cr.s_bar[view.first_index + static_cast<int>(i)]);
  }
  return out;
}

inline FieldVector AnswerServer(const SchemeParams& p, int server,
                                const QuerySet& qs, const MessageStore& w,
                                const CommonRandomness& cr) {
  (void)p;
  return AnswerServer(ViewOf(qs, server), w, cr);
}

// [G ; 0_{L x k} I_L], l_bar x l_bar.
inline FieldMatrix StackedMatrix(const SchemeParams& p) {
  FieldMatrix m(p.l_bar, p.l_bar, p.field);
  for (int i = 0; i < p.code_dim; ++i) {
    for (int j = 0; j < p.l_bar; ++j) m.Set(i, j, p.grs.matrix.at(i, j));
  }
  for (int i = 0; i < p.msg_len; ++i) {
    m.Set(p.code_dim + i, p.code_dim + i, p.field.One());
  }
  return m;
}

inline FieldMatrix DecodingMatrix(const SchemeParams& p) {
  try {
    return Invert(StackedMatrix(p));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularMatrix) throw;
    throw Error(ErrorCode::kSingularStack,
                "[G ; 0 I] is singular: the generator is not MDS");
  }
}

struct Decoded {
  FieldVector message;  // W_theta, L symbols
  FieldVector side;     // X_1 .. X_k
};

/// Recovers (X_1..X_k, W_theta) = answers * [G ; 0 I]^-1.
inline Decoded Decode(const SchemeParams& p, const FieldVector& answers) {
  SPIR_ENFORCE(static_cast<int>(answers.size()) == p.l_bar,
               ErrorCode::kInvalidArgument, "decoding needs all l_bar answers");
  FieldVector all = Multiply(answers, DecodingMatrix(p));
  Decoded d;
  d.side.assign(all.begin(), all.begin() + p.code_dim);
  d.message.assign(all.begin() + p.code_dim, all.end());
  return d;
}

struct Transcript {
  SchemeParams params;
  std::uint64_t seed = 0;
  int theta = 1;
  MessageStore messages{FieldMatrix(0, 0, PrimeField(2))};
  QuerySet queries;
  CommonRandomness common;
  FieldVector answers;  // A_1 .. A_l_bar, server order
  FieldVector decoded;
  FieldVector side_values;
};

/// Generate, answer, decode. Deterministic in (params, w, theta, seed):
/// the user's U is drawn first, then the servers' S, from one generator.
inline Transcript RunSession(const SchemeParams& p, const MessageStore& w,
                             int theta, std::uint64_t seed) {
  Rng rng(seed);
  Transcript t;
  t.params = p;
  t.seed = seed;
  t.theta = theta;
  t.messages = w;
  t.queries = GenerateQueries(p, theta, rng);
  t.common = SampleCommonRandomness(p, rng);
  for (int n = 0; n < p.n_servers; ++n) {
    auto a = AnswerServer(ViewOf(t.queries, n), w, t.common);
    t.answers.insert(t.answers.end(), a.begin(), a.end());
  }
  auto d = Decode(p, t.answers);
  t.decoded = std::move(d.message);
  t.side_values = std::move(d.side);
  return t;
}

// ---- JSON ----

inline nlohmann::json RationalsToStrings(const std::vector<Rational>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : v) out.push_back(ToString(r));
  return out;
}

inline nlohmann::json SchemeToJson(const SchemeParams& p) {
  return {{"n_servers", p.n_servers},
          {"n_messages", p.n_messages},
          {"y", RationalsToStrings(p.y)},
          {"f", ToString(p.f)},
          {"l_bar", p.l_bar},
          {"msg_len", p.msg_len},
          {"code_dim", p.code_dim},
          {"modulus", p.field.modulus()},
          {"counts", p.counts},
          {"rho", ToString(p.Rho())},
          {"rate", ToString(MeasureRate(p))},
          {"joint", SetsToJson(p.joint.sets)}};
}

// Re-plans from the stored (y, f, K, joint, modulus) and checks that the
// derived fields agree with what was written.
inline SchemeParams SchemeFromJson(const nlohmann::json& j) {
  int n = j.at("n_servers").get<int>();
  std::vector<Rational> y;
  for (const auto& v : j.at("y")) y.push_back(ParseRational(v.get<std::string>()));
  Pattern joint{n, SetsFromJson(j.at("joint"), n), PatternKind::kJoint};
  joint = ReduceMaximal(joint.sets, n, PatternKind::kJoint);
  PlanOptions opts;
  opts.modulus = j.at("modulus").get<std::uint64_t>();
  SchemeParams p = PlanScheme(y, ParseRational(j.at("f").get<std::string>()),
                              j.at("n_messages").get<int>(), joint, opts);
  auto counts = j.at("counts").get<std::vector<int>>();
  SPIR_ENFORCE(p.l_bar == j.at("l_bar").get<int>() &&
                   p.msg_len == j.at("msg_len").get<int>() &&
                   p.code_dim == j.at("code_dim").get<int>(),
               ErrorCode::kParseError, "scheme dimensions disagree with y");
  // Counts may have been edited (tampering experiments) but must still
  // partition the l_bar queries.
  int total = 0;
  for (int c : counts) total += c;
  SPIR_ENFORCE(static_cast<int>(counts.size()) == n && total == p.l_bar,
               ErrorCode::kParseError, "counts must partition l_bar queries");
  p.counts = counts;
  return p;
}

inline nlohmann::json VectorToJson(const FieldVector& v) {
  return RawValues(v);
}

inline FieldVector VectorFromJson(const nlohmann::json& j, const PrimeField& f) {
  FieldVector out;
  for (const auto& v : j) {
    auto x = v.get<std::uint64_t>();
    SPIR_ENFORCE(x < f.modulus(), ErrorCode::kParseError,
                 "field value " + std::to_string(x) + " not reduced");
    out.emplace_back(x, f.modulus());
  }
  return out;
}

inline nlohmann::json TranscriptToJson(const Transcript& t) {
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : t.queries.query_vectors) queries.push_back(VectorToJson(q));
  nlohmann::json u = nlohmann::json::array();
  for (int l = 0; l < t.queries.randomness.rows(); ++l) {
    u.push_back(VectorToJson(t.queries.randomness.Row(l)));
  }
  return {{"scheme", SchemeToJson(t.params)},
          {"modulus", t.params.field.modulus()},
          {"seed", t.seed},
          {"theta", t.theta},
          {"messages", VectorToJson(t.messages.Stacked())},
          {"user_randomness", u},
          {"queries", queries},
          {"common_randomness", VectorToJson(t.common.s)},
          {"masks", VectorToJson(t.common.s_bar)},
          {"answers", VectorToJson(t.answers)},
          {"decoded", VectorToJson(t.decoded)},
          {"side_values", VectorToJson(t.side_values)}};
}

inline Transcript TranscriptFromJson(const nlohmann::json& j) {
  Transcript t;
  t.params = SchemeFromJson(j.at("scheme"));
  const auto& f = t.params.field;
  SPIR_ENFORCE(j.at("modulus").get<std::uint64_t>() == f.modulus(),
               ErrorCode::kParseError, "modulus mismatch");
  t.seed = j.at("seed").get<std::uint64_t>();
  t.theta = j.at("theta").get<int>();
  t.messages = MessagesFromStacked(t.params, VectorFromJson(j.at("messages"), f));
  FieldMatrix u(t.params.code_dim, t.params.VectorLength(), f);
  const auto& ju = j.at("user_randomness");
  SPIR_ENFORCE(static_cast<int>(ju.size()) == u.rows(), ErrorCode::kParseError,
               "user randomness must have k rows");
  for (int l = 0; l < u.rows(); ++l) {
    auto row = VectorFromJson(ju[l], f);
    SPIR_ENFORCE(static_cast<int>(row.size()) == u.cols(), ErrorCode::kParseError,
                 "user randomness row length != K*L");
    for (int r = 0; r < u.cols(); ++r) u.Set(l, r, row[r]);
  }
  t.queries = BuildQueries(t.params, t.theta, u);
  std::vector<FieldVector> stored;
  for (const auto& q : j.at("queries")) stored.push_back(VectorFromJson(q, f));
  SPIR_ENFORCE(stored == t.queries.query_vectors, ErrorCode::kParseError,
               "stored queries do not match the user randomness");
  t.common = MakeCommonRandomness(t.params, VectorFromJson(j.at("common_randomness"), f));
  SPIR_ENFORCE(VectorFromJson(j.at("masks"), f) == t.common.s_bar,
               ErrorCode::kParseError, "stored masks != s * G");
  t.answers = VectorFromJson(j.at("answers"), f);
  t.decoded = VectorFromJson(j.at("decoded"), f);
  t.side_values = VectorFromJson(j.at("side_values"), f);
  return t;
}

}  // namespace spir
