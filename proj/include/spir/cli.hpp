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
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "spir/capacity.hpp"
#include "spir/error.hpp"
#include "spir/exact_lp.hpp"
#include "spir/pattern.hpp"
#include "spir/protocol.hpp"
#include "spir/random_patterns.hpp"
#include "spir/rational.hpp"
#include "spir/verifier.hpp"

namespace spir::cli {

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInvalidPattern = 2;
inline constexpr int kExitInsufficientRho = 3;
inline constexpr int kExitVerificationFailed = 4;

enum class Format { kTable, kJson };

struct RunConfig {
  std::string command;
  std::string pattern_path;
  std::string pattern_json;  // inline alternative to pattern_path
  std::optional<Rational> rho;
  int messages = 2;  // K
  std::uint64_t seed = 1;
  int trials = 1000;
  std::uint64_t budget = kDefaultBudget;
  Format format = Format::kTable;
  bool force_threshold = false;
  std::string out_path;
  std::optional<std::vector<int>> assignment;
  std::optional<std::uint64_t> modulus;
  int theta = 1;
  int rounds = 100;
  int max_n = 6;
};

inline bool IsPatternError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kIndexOutOfRange:
    case ErrorCode::kEmptySet:
    case ErrorCode::kEmptyPattern:
    case ErrorCode::kFullSetPresent:
    case ErrorCode::kMismatchedServers:
      return true;
    default:
      return false;
  }
}

inline PatternFile LoadPatternFile(const RunConfig& cfg) {
  nlohmann::json j;
  try {
    if (!cfg.pattern_json.empty()) {
      j = nlohmann::json::parse(cfg.pattern_json);
    } else {
      std::ifstream in(cfg.pattern_path);
      SPIR_ENFORCE(in.good(), ErrorCode::kParseError,
                   "cannot open pattern file '" + cfg.pattern_path + "'");
      j = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  return PatternFileFromJson(j);
}

namespace detail {

inline std::string ServersToString(const std::vector<int>& servers) {
  std::string out;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(servers[i] + 1);
  }
  return out;
}

inline void PrintDiagnostics(const PatternFile& pf, std::ostream& err) {
  for (const Pattern* p : {&pf.collusion, &pf.eavesdropping}) {
    auto d = Validate(*p);
    if (!d.non_maximal.empty()) {
      err << "note: dropped non-maximal " << PatternKindName(p->kind)
          << " sets " << SetsToString(d.non_maximal) << "\n";
    }
  }
}

struct Planned {
  PatternFile file;
  CapacityReport report;
  SchemeParams params;
  Rational rho_used;
};

// Shared by scheme / simulate / verify. Returns an exit code when the
// run must stop, otherwise fills `out`.
inline std::optional<int> PlanFromConfig(const RunConfig& cfg, Planned& out,
                                         std::ostream& err) {
  out.file = LoadPatternFile(cfg);
  PrintDiagnostics(out.file, err);
  out.report = SpirCapacity(out.file.collusion, out.file.eavesdropping, cfg.rho);
  if (!cfg.force_threshold) {
    if (!cfg.rho) {
      err << "error: --rho NUM/DEN or --force-threshold is required\n";
      return kExitInternal;
    }
    if (*cfg.rho < out.report.rho_threshold) {
      err << "error: rho = " << ToString(*cfg.rho) << " is below the threshold "
          << ToString(out.report.rho_threshold)
          << " = 1/(F*-1); the capacity is zero (not enough common "
             "randomness) and no scheme exists\n";
      return kExitInsufficientRho;
    }
  }
  PlanOptions opts;
  opts.modulus = cfg.modulus;
  out.params = PlanScheme(out.report.y_star, out.report.f_star, cfg.messages,
                          out.report.joint_pattern, opts);
  out.rho_used = out.params.Rho();
  return std::nullopt;
}

inline int Guard(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return IsPatternError(e.code()) ? kExitInvalidPattern : kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace detail

inline int RunCapacity(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::Guard(err, [&] {
    auto pf = LoadPatternFile(cfg);
    detail::PrintDiagnostics(pf, err);
    auto r = SpirCapacity(pf.collusion, pf.eavesdropping, cfg.rho);
    if (cfg.format == Format::kJson) {
      out << CapacityReportToJson(r).dump(2) << "\n";
      return kExitOk;
    }
    out << "joint pattern     " << SetsToString(r.joint_pattern.sets) << "\n";
    if (!r.added_singletons.empty()) {
      out << "added singletons  " << detail::ServersToString(r.added_singletons)
          << "\n";
    }
    out << "F*                " << ToString(r.f_star) << " (" << ToDecimal(r.f_star)
        << ")\n";
    out << "y*                (" << JoinRationals(r.y_star) << ")\n";
    out << "rho threshold     " << ToString(r.rho_threshold) << "\n";
    if (r.rho_given) {
      out << "rho               " << ToString(*r.rho_given)
          << (r.achievable ? " (sufficient)" : " (below threshold)") << "\n";
    }
    out << "capacity          " << ToString(r.capacity) << " ("
        << ToDecimal(r.capacity) << ")\n";
    return kExitOk;
  });
}

inline int RunScheme(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::Guard(err, [&] {
    detail::Planned pl;
    if (auto code = detail::PlanFromConfig(cfg, pl, err)) return *code;
    const auto& p = pl.params;
    if (cfg.format == Format::kJson) {
      out << SchemeToJson(p).dump(2) << "\n";
      return kExitOk;
    }
    std::string counts;
    for (std::size_t i = 0; i < p.counts.size(); ++i) {
      counts += (i ? ", " : "") + std::to_string(p.counts[i]);
    }
    out << "F                 " << ToString(p.f) << "\n";
    out << "l_bar             " << p.l_bar << "\n";
    out << "L                 " << p.msg_len << "\n";
    out << "k                 " << p.code_dim << "\n";
    out << "q                 " << p.field.modulus() << "\n";
    out << "counts            (" << counts << ")\n";
    out << "rho used          " << ToString(pl.rho_used) << "\n";
    out << "rate              " << ToString(MeasureRate(p)) << "\n";
    return kExitOk;
  });
}

inline int RunSimulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::Guard(err, [&] {
    detail::Planned pl;
    if (auto code = detail::PlanFromConfig(cfg, pl, err)) return *code;
    std::seed_seq msg_seed{cfg.seed, std::uint64_t{0x6d657373}};
    Rng msg_rng(msg_seed);
    auto w = RandomMessages(pl.params, msg_rng);
    auto t = RunSession(pl.params, w, cfg.theta, cfg.seed);
    auto j = TranscriptToJson(t);
    if (!cfg.out_path.empty()) {
      std::ofstream f(cfg.out_path);
      SPIR_ENFORCE(f.good(), ErrorCode::kInvalidArgument,
                   "cannot write '" + cfg.out_path + "'");
      f << j.dump(2) << "\n";
    } else if (cfg.format == Format::kJson) {
      out << j.dump(2) << "\n";
    }
    bool ok = t.decoded == w.Message(cfg.theta);
    out << "decoded " << (ok ? "ok" : "MISMATCH") << "\n";
    out << "rate " << ToString(MeasureRate(pl.params)) << "\n";
    return ok ? kExitOk : kExitVerificationFailed;
  });
}

inline int RunVerify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::Guard(err, [&] {
    detail::Planned pl;
    if (auto code = detail::PlanFromConfig(cfg, pl, err)) return *code;
    SchemeParams p = pl.params;
    if (cfg.assignment) {
      int total = 0;
      for (int c : *cfg.assignment) total += c;
      SPIR_ENFORCE(static_cast<int>(cfg.assignment->size()) == p.n_servers &&
                       total == p.l_bar,
                   ErrorCode::kInvalidArgument,
                   "--assignment must give N counts summing to l_bar = " +
                       std::to_string(p.l_bar));
      p.counts = *cfg.assignment;
    }
    auto pc = ReduceMaximal(pl.file.collusion.sets, p.n_servers,
                            PatternKind::kCollusion);
    auto pe = ReduceMaximal(pl.file.eavesdropping.sets, p.n_servers,
                            PatternKind::kEavesdropping);

    std::vector<PrivacyCertificate> certs;
    certs.push_back(VerifyUserPrivacyRank(p, pc));
    certs.push_back(VerifyEvePrivacyRank(p, pe));
    certs.push_back(VerifyDbPrivacyUser(p));
    certs.push_back(VerifyCorrectnessSweep(p, cfg.trials, cfg.seed));
    certs.push_back(VerifyUserPrivacyAgainstEveRank(p, pe));

    std::vector<std::string> skipped;
    if (EnumerationSize(p, cfg.budget)) {
      for (const auto& s : pc.sets) {
        for (int theta = 2; theta <= p.n_messages; ++theta) {
          certs.push_back(ExhaustiveCertificate(
              p, Constraint::kUserPrivacy, {Observer::Kind::kServers, s},
              {Comparison::Kind::kThetaPair, 1, theta}, cfg.budget));
        }
      }
      for (int theta = 1; theta <= p.n_messages; ++theta) {
        certs.push_back(ExhaustiveCertificate(
            p, Constraint::kDbPrivacyUser, {Observer::Kind::kUser, {}},
            {Comparison::Kind::kMessageMarginal, theta, theta}, cfg.budget));
        for (const auto& s : pe.sets) {
          certs.push_back(ExhaustiveCertificate(
              p, Constraint::kDbPrivacyEve, {Observer::Kind::kEavesdropper, s},
              {Comparison::Kind::kMessageMarginal, theta, theta}, cfg.budget));
        }
      }
      certs.push_back(VerifyCorrectnessExhaustive(p, cfg.budget));
    } else {
      skipped.push_back("exhaustive checks skipped: enumeration exceeds budget " +
                        std::to_string(cfg.budget));
    }

    bool pass = true;
    for (const auto& c : certs) {
      if (!c.informational) pass = pass && c.pass;
    }
    if (cfg.format == Format::kJson) {
      nlohmann::json bundle = {{"scheme", SchemeToJson(p)},
                               {"certificates", nlohmann::json::array()},
                               {"skipped", skipped},
                               {"verdict", pass ? "pass" : "fail"}};
      for (const auto& c : certs) bundle["certificates"].push_back(CertificateToJson(c));
      out << bundle.dump(2) << "\n";
    } else {
      for (const auto& c : certs) {
        out << (c.pass ? "PASS " : "FAIL ") << ConstraintName(c.constraint) << " ["
            << MethodName(c.method) << ", " << c.scope << "]"
            << (c.informational ? " (informational)" : "") << "\n";
        for (const auto& s : c.sets) {
          if (!s.pass) {
            out << "     set " << SetsToString({s.set}) << " sees " << s.observed
                << " > k = " << s.limit << " or rank " << s.rank << "\n";
          }
        }
      }
      for (const auto& s : skipped) out << "SKIP " << s << "\n";
      out << "verdict " << (pass ? "pass" : "fail") << "\n";
    }
    return pass ? kExitOk : kExitVerificationFailed;
  });
}

inline int RunSelftest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return detail::Guard(err, [&] {
    Rng rng(cfg.seed);
    int duality_ok = 0;
    for (int i = 0; i < cfg.rounds; ++i) {
      auto joint = RandomJointPattern(rng, cfg.max_n);
      auto cert = VerifyDuality(BuildIncidenceMatrix(joint));
      duality_ok += cert.complementary_slackness;
    }
    int closed_total = 0, closed_ok = 0;
    for (int n = 2; n <= cfg.max_n; ++n) {
      for (int t = 1; t < n; ++t) {
        for (int e = 1; e < n; ++e) {
          int m = std::max(t, e);
          auto r = SpirCapacity(SymmetricPattern(n, t, PatternKind::kCollusion),
                                SymmetricPattern(n, e, PatternKind::kEavesdropping),
                                Rational(m, n - m));
          ++closed_total;
          closed_ok += r.f_star == Rational(n, m) &&
                       r.capacity == 1 - Rational(m, n) && r.achievable;
        }
      }
      auto single = SpirCapacity(SingletonPattern(n), Pattern{n, {}, PatternKind::kEavesdropping},
                                 Rational(1, n - 1));
      ++closed_total;
      closed_ok += single.capacity == 1 - Rational(1, n);
    }
    bool pass = duality_ok == cfg.rounds && closed_ok == closed_total;
    out << "duality       " << duality_ok << "/" << cfg.rounds
        << " random patterns (seed " << cfg.seed << ", N <= " << cfg.max_n << ")\n";
    out << "closed forms  " << closed_ok << "/" << closed_total << "\n";
    out << "selftest " << (pass ? "pass" : "fail") << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
  });
}

inline int Dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "capacity") return RunCapacity(cfg, out, err);
  if (cfg.command == "scheme") return RunScheme(cfg, out, err);
  if (cfg.command == "simulate") return RunSimulate(cfg, out, err);
  if (cfg.command == "verify") return RunVerify(cfg, out, err);
  if (cfg.command == "selftest") return RunSelftest(cfg, out, err);
  err << "unknown command '" << cfg.command << "'\n";
  return kExitInternal;
}

}  // namespace spir::cli
