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


#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkpkerr/config.hpp"
#include "gkpkerr/decoders.hpp"
#include "gkpkerr/errors.hpp"
#include "gkpkerr/evolution.hpp"
#include "gkpkerr/gkp_code.hpp"
#include "gkpkerr/io.hpp"
#include "gkpkerr/sbs.hpp"
#include "gkpkerr/wigner.hpp"

namespace gkpkerr {

inline constexpr const char* kVersion = "0.1.0";

/// Integrator and truncation diagnostics of one sweep point.
struct PointDiagnostics {
  double delta = 0.0;
  double gamma = 0.0;
  int dim = 0;
  long steps = 0;
  double step = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double wall_time_s = 0.0;
  /// Weight of the gate output on span{|0_delta>, |1_delta>}.
  double span_weight = 0.0;
  bool truncation_checked = false;
  bool truncation_converged = true;
  double truncation_difference = 0.0;
  std::string error;
};

struct RunRecord {
  std::string command;
  SweepConfig config;
  std::vector<ResultRow> rows;
  std::vector<PointDiagnostics> diagnostics;
  std::vector<SbsRecord> sbs_records;
  /// Most severe error met by any point; the sweep itself continues.
  std::optional<ErrorKind> worst_error;
  std::vector<std::string> notes;
  double wall_time_s = 0.0;
};

/// Full record (config snapshot, rows, diagnostics, timing) as JSON.
std::string run_record_json(const RunRecord& record);
/// Writes <stem>.csv, <stem>.json, <stem>.svg and, when present, <stem>_sbs.jsonl.
void write_run(const RunRecord& record, const std::string& out_dir, const std::string& stem);

/// Truncation used for `delta`: the config override or the default.
int dim_for(const SweepConfig& config, double delta);
SbsParams sbs_params(const SweepConfig& config, double delta);
IntegratorOptions integrator_options(const SweepConfig& config);

/// Code, sBs channel and (optionally) SBS basis at one truncation.
struct CodeContext {
  GkpCode code;
  SbsChannel channel;
  SbsBasis basis;
};
CodeContext make_context(const SweepConfig& config, double delta, int dim, bool with_basis = true);

/// Kerr gate for t_K with loss parameter gamma and the config's dephasing.
EvolutionResult kerr_gate(const OscillatorState& input, double gamma, const SweepConfig& config);

/// |+Y_delta> through the lossy gate, decoded by the perfect-ED map.
struct Fig2aPoint {
  double fidelity = 0.0;
  double success_prob = 0.0;
  PointDiagnostics diagnostics;
};
Fig2aPoint fig2a_point(const SweepConfig& config, const GkpCode& code, double gamma);

/// |(0,0),+Y> through the lossy gate and `n_rounds` post-selected rounds
/// (cumulative, ascending), decoded by the SBS map. Entry k of the result
/// belongs to the k-th sorted round count.
struct RoundPoint {
  int n_rounds = 0;
  double fidelity_sbs = 0.0;
  double fidelity_perfect_ed = 0.0;
  double success_prob = 0.0;
};
std::vector<RoundPoint> fig2b_curve(const SweepConfig& config, const CodeContext& ctx, double gamma,
                                    std::vector<int> n_rounds, PointDiagnostics* diagnostics = nullptr);

RunRecord run_fig2a(const SweepConfig& config);
RunRecord run_fig2b(const SweepConfig& config);

/// Combined-noise scenario from `config.realistic`: loss gamma_init on the
/// input, lossy gate, rounds with readout confusion and optional round loss.
struct RealisticPoint {
  std::vector<RoundPoint> curve;
  std::vector<SbsRecord> records;
  PointDiagnostics diagnostics;
};
RealisticPoint realistic_point(const SweepConfig& config, int dim);
RunRecord run_realistic(const SweepConfig& config);

/// Post-selected rounds on each gate output until steady.
RunRecord run_sbs_steady(const SweepConfig& config);

struct Fig1Panel {
  std::string name;
  std::string description;
  OscillatorState state;
  WignerGrid grid;
};
struct Fig1Result {
  double delta = 0.0;
  int dim = 0;
  Vector codeword0;
  Vector codeword1;
  std::vector<Fig1Panel> panels;
};
/// Wigner panels: (a) |+Y>, (b) U_K|+Y>, (c) |+>, (d) cubic gate on |+>.
Fig1Result run_fig1(const SweepConfig& config);
void write_fig1(const Fig1Result& result, const std::string& out_dir);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
};
/// Fast invariant suite behind the `validate` subcommand.
std::vector<ValidationCheck> run_validation(const SweepConfig& config);
std::string validation_csv(const std::vector<ValidationCheck>& checks);

/// Exit code for the CLI: 0 ok, 2 config, 3 numeric, 4 post-selection starved.
int exit_code_for(ErrorKind kind);

}  // namespace gkpkerr
