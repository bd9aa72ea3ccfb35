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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spir/cli.hpp"

int main(int argc, char** argv) {
  using spir::cli::RunConfig;
  CLI::App app{"SPIR capacity under collusion and eavesdropping patterns"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string rho, format = "table";
  std::vector<int> assignment;
  std::uint64_t modulus = 0;

  auto add_pattern = [&](CLI::App* sub) {
    auto* file = sub->add_option("--pattern", cfg.pattern_path, "pattern JSON file");
    auto* inl = sub->add_option("--pattern-json", cfg.pattern_json, "inline pattern JSON");
    file->excludes(inl);
    sub->add_option("--rho", rho, "common randomness ratio as NUM/DEN");
    sub->add_option("--format", format, "json | table")
        ->check(CLI::IsMember({"json", "table"}));
  };
  auto add_scheme = [&](CLI::App* sub) {
    add_pattern(sub);
    sub->add_option("--k", cfg.messages, "number of messages K (>= 2)");
    sub->add_flag("--force-threshold", cfg.force_threshold,
                  "plan with rho = 1/(F*-1) instead of checking --rho");
    sub->add_option("--modulus", modulus, "prime field size (default: smallest prime >= l_bar)");
  };

  auto* capacity = app.add_subcommand("capacity", "capacity report for a pattern file");
  add_pattern(capacity);
  auto* scheme = app.add_subcommand("scheme", "plan the retrieval scheme");
  add_scheme(scheme);
  auto* simulate = app.add_subcommand("simulate", "run one retrieval session");
  add_scheme(simulate);
  simulate->add_option("--seed", cfg.seed, "session seed");
  simulate->add_option("--theta", cfg.theta, "desired message index (1-based)");
  simulate->add_option("--out", cfg.out_path, "write the transcript JSON here");
  auto* verify = app.add_subcommand("verify", "certify correctness and privacy");
  add_scheme(verify);
  verify->add_option("--seed", cfg.seed, "sweep seed");
  verify->add_option("--trials", cfg.trials, "correctness sweep sessions");
  verify->add_option("--budget", cfg.budget, "max outcomes per exhaustive table");
  verify->add_option("--assignment", assignment,
                     "override per-server query counts (comma separated)")
      ->delimiter(',');
  auto* selftest = app.add_subcommand("selftest", "duality and closed-form sweep");
  selftest->add_option("--seed", cfg.seed, "random pattern seed");
  selftest->add_option("--rounds", cfg.rounds, "random patterns for the duality check");
  selftest->add_option("--max-n", cfg.max_n, "largest N (3 for a quick run)")
      ->check(CLI::Range(2, 8));

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? spir::cli::Format::kJson : spir::cli::Format::kTable;
  if (!assignment.empty()) cfg.assignment = assignment;
  if (modulus) cfg.modulus = modulus;
  if (!rho.empty()) {
    try {
      cfg.rho = spir::ParseRational(rho);
    } catch (const spir::Error& e) {
      std::cerr << "error: --rho: " << e.what() << "\n";
      return spir::cli::kExitInternal;
    }
  }
  if ((cfg.command != "selftest") && cfg.pattern_path.empty() &&
      cfg.pattern_json.empty()) {
    std::cerr << "error: --pattern or --pattern-json is required\n";
    return spir::cli::kExitInvalidPattern;
  }
  return spir::cli::Dispatch(cfg, std::cout, std::cerr);
}
