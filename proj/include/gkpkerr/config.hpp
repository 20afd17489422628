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

#include <cstdint>
#include <string>
#include <vector>

namespace gkpkerr {

/// Parameters of the combined-noise scenario.
struct RealisticConfig {
  double delta = 0.36;
  /// Loss on the input state before the gate.
  double gamma_init = 1e-2;
  /// Loss during the gate.
  double gamma = 1e-2;
  double p_eg = 1e-3;
  double p_ge = 0.0;
  int n_rounds = 30;
  /// Loss before every sBs round.
  double round_loss_gamma = 0.0;
  /// Oscillator dephasing during the gate, as kappa_phi * t_K.
  double dephasing = 0.0;
};

struct WignerConfig {
  double delta = 0.25;
  double lo = -7.0;
  double hi = 7.0;
  int points = 201;
};

/// Everything a run needs. Serialized as JSON; parsing a dumped config gives
/// back an identical object.
struct SweepConfig {
  std::vector<double> deltas{0.36, 0.25};
  std::vector<double> gammas;
  std::vector<int> n_rounds{0, 1, 2, 5, 30};
  /// "perfect_ed", "sbs" or "both".
  std::string decoder = "both";
  /// Fock truncation override; 0 selects the default for each delta.
  int dim = 0;
  /// Enables delta = 0.15 points (large truncation, slow).
  bool allow_fine_delta = false;
  /// Angular Kerr rate; the gate time is pi / (4 |K|).
  double kerr_rate = -1.0;
  /// Oscillator dephasing during the gate, as kappa_phi * t_K.
  double dephasing = 0.0;
  /// Loss on the input state before the gate.
  double gamma_init = 0.0;
  double p_eg = 0.0;
  double p_ge = 0.0;
  double round_loss_gamma = 0.0;
  double ancilla_dephasing = 0.0;
  std::string rotation_first = "-x";
  std::string rotation_second = "+x";
  /// Recompute every point at dim + 20 and flag disagreements.
  bool truncation_check = true;
  double truncation_abs_tol = 1e-7;
  double truncation_rel_tol = 0.2;
  int min_steps = 2000;
  double step_safety = 0.05;
  double steady_tol = 1e-6;
  int steady_max_rounds = 100;
  int trajectories = 5000;
  RealisticConfig realistic;
  WignerConfig wigner;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = "out";

  /// 12 log-spaced points in [1e-4, 3e-2] preceded by 0.
  static std::vector<double> default_gammas();
  SweepConfig();

  /// Throws kConfig on invalid values.
  void validate() const;
};

std::string to_json(const SweepConfig& config);
/// Throws kConfig on malformed input or unknown keys.
SweepConfig config_from_json(const std::string& text);
SweepConfig load_config(const std::string& path);

}  // namespace gkpkerr
