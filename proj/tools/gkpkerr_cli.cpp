// Copyright 2026 The gkpkerr Authors
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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gkpkerr/config.hpp"
#include "gkpkerr/errors.hpp"
#include "gkpkerr/experiments.hpp"
#include "gkpkerr/io.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> delta;
  std::optional<double> gamma;
  std::optional<int> rounds;
  std::optional<int> dim;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--delta", o.delta, "Envelope size (replaces the delta list)");
  cmd->add_option("--gamma", o.gamma, "Loss parameter (replaces the gamma grid)");
  cmd->add_option("--rounds", o.rounds, "Number of sBs rounds");
  cmd->add_option("--dim", o.dim, "Fock truncation");
}

gkpkerr::SweepConfig resolve(const std::string& command, const Overrides& o) {
  gkpkerr::SweepConfig c = o.config_path.empty() ? gkpkerr::SweepConfig{} : gkpkerr::load_config(o.config_path);
  if (!o.out_dir.empty()) c.out_dir = o.out_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.dim) c.dim = *o.dim;
  if (command == "realistic") {
    if (o.delta) c.realistic.delta = *o.delta;
    if (o.gamma) c.realistic.gamma = *o.gamma;
    if (o.rounds) c.realistic.n_rounds = *o.rounds;
  } else if (command == "fig1") {
    if (o.delta) c.wigner.delta = *o.delta;
  } else {
    if (o.delta) c.deltas = {*o.delta};
    if (o.gamma) c.gammas = {*o.gamma};
    if (o.rounds) c.n_rounds = {*o.rounds};
  }
  if (o.delta && *o.delta < 0.2) c.allow_fine_delta = true;
  c.validate();
  return c;
}

int finish(const gkpkerr::RunRecord& record, const std::string& stem) {
  gkpkerr::write_run(record, record.config.out_dir, stem);
  std::cout << gkpkerr::results_csv(record.rows);
  if (record.worst_error) {
    std::cerr << "some points failed: " << gkpkerr::to_string(*record.worst_error) << "\n";
    return gkpkerr::exit_code_for(*record.worst_error);
  }
  return 0;
}

int run(const std::string& command, const Overrides& o) {
  const gkpkerr::SweepConfig config = resolve(command, o);
  gkpkerr::write_text(config.out_dir + "/" + (command == "sbs-steady" ? "sbs_steady" : command) + "_config.json",
                      gkpkerr::to_json(config));
  if (command == "fig1") {
    const auto result = gkpkerr::run_fig1(config);
    gkpkerr::write_fig1(result, config.out_dir);
    for (const auto& panel : result.panels) {
      std::printf("panel %s: %s, grid integral %.6f%s\n", panel.name.c_str(), panel.description.c_str(),
                  panel.grid.integral(), panel.grid.resolution_warning ? " (resolution warning)" : "");
    }
    return 0;
  }
  if (command == "fig2a") return finish(gkpkerr::run_fig2a(config), "fig2a");
  if (command == "fig2b") return finish(gkpkerr::run_fig2b(config), "fig2b");
  if (command == "realistic") return finish(gkpkerr::run_realistic(config), "realistic");
  if (command == "sbs-steady") return finish(gkpkerr::run_sbs_steady(config), "sbs_steady");
  if (command == "validate") {
    const auto checks = gkpkerr::run_validation(config);
    gkpkerr::write_text(config.out_dir + "/validate.csv", gkpkerr::validation_csv(checks));
    bool ok = true;
    for (const auto& c : checks) {
      std::printf("%-40s %s  value=%.3e bound=%.3e\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.value, c.bound);
      ok = ok && c.passed;
    }
    return ok ? 0 : 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GKP magic-state preparation with a Kerr gate"};
  app.require_subcommand(1);
  Overrides overrides;
  const char* commands[][2] = {{"fig1", "Wigner panels of the gate inputs and outputs"},
                               {"fig2a", "Perfect-ED fidelity versus loss"},
                               {"fig2b", "Post-selected sBs fidelity versus loss"},
                               {"realistic", "Combined-noise scenario"},
                               {"sbs-steady", "sBs rounds until steady state"},
                               {"validate", "Fast invariant checks"}};
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, overrides);
  } catch (const gkpkerr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gkpkerr::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
