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

#include <array>
#include <string>
#include <vector>

#include "gkpkerr/evolution.hpp"
#include "gkpkerr/fock.hpp"
#include "gkpkerr/gkp_code.hpp"

namespace gkpkerr {

/// Signed axis of an ancilla pi/2 rotation exp(-i (pi/4) sigma_axis).
enum class RotationAxis { kPlusX, kMinusX, kPlusY, kMinusY };

std::string to_string(RotationAxis axis);
RotationAxis parse_rotation_axis(const std::string& text);
Matrix2 rotation_matrix(RotationAxis axis);

/// Axes of the two ancilla rotations that surround the big conditional
/// displacement in each half-round.
struct RotationConvention {
  RotationAxis first = RotationAxis::kMinusX;
  RotationAxis second = RotationAxis::kPlusX;

  friend bool operator==(const RotationConvention&, const RotationConvention&) = default;
};

/// Outcome index: 0 = g (no error), 1 = e (error flagged).
enum Outcome : int { kOutcomeG = 0, kOutcomeE = 1 };

struct SbsParams {
  double delta = 0.25;
  /// Stabilizer length l in quadrature units.
  double big_length = 2.0 * kSqrtPi;
  /// Trim epsilon; each branch is displaced by epsilon / 4.
  double trim = 0.0;
  RotationConvention rotations;
  /// Measurement confusion p(e|g), p(g|e).
  double p_eg = 0.0;
  double p_ge = 0.0;
  /// Phase-flip probability of the ancilla right after the big displacement.
  double ancilla_dephasing = 0.0;
  /// Loss parameter applied to the oscillator before every round.
  double round_loss_gamma = 0.0;

  /// Default parameters for envelope delta: trim = l sinh(delta^2).
  static SbsParams for_delta(double delta);
  void validate() const;
};

/// Kraus operators of one half-round, resolved by ancilla outcome.
struct HalfRoundKraus {
  std::array<KrausSet, 2> by_outcome;
};

/// One full round: the q half-round followed by the p half-round.
struct SbsChannel {
  int dim = 0;
  SbsParams params;
  HalfRoundKraus q_half;
  HalfRoundKraus p_half;
  /// kraus[2 j + k] holds the operators reported as outcome (j, k), where j is
  /// the q outcome and k the p outcome.
  std::array<KrausSet, 4> kraus;
  /// Loss applied before each round; empty when disabled.
  KrausSet round_loss;
  /// Logical action of the gg branch on the code space (X Z for the default
  /// convention). Post-selected rounds accumulate it as a Pauli frame.
  Matrix2 logical_frame = Matrix2::Identity();

  const KrausSet& outcome(int j, int k) const { return kraus[2 * j + k]; }
  /// The single no-error operator K_gg of an ideal-ancilla, confusion-free channel.
  const Matrix& k_gg() const;
};

/// Kraus operators of one half-round acting along quadrature `axis_phase`
/// (1 for the q round, -i for the p round).
HalfRoundKraus build_half_round(const SbsParams& params, Complex axis_phase, int dim);

/// Builds both half-rounds and their products K_jk = K^(p)_k K^(q)_j.
SbsChannel build_sbs_round(const SbsParams& params, int dim);

/// Relabels outcomes of every measurement with the confusion matrix
/// p(reported | true).
SbsChannel apply_measurement_error(const SbsChannel& channel, double p_eg, double p_ge);

/// max |sum K^dag K - I| over all outcomes, interior block.
double completeness_defect(const SbsChannel& channel);

/// Fidelity of normalized K_gg |0_delta> with the span of the codewords,
/// times the no-error probability. The calibration maximizes it.
double calibration_score(const GkpCode& code, const SbsChannel& channel);

struct CalibrationResult {
  RotationConvention best;
  double best_score = 0.0;
  std::vector<std::pair<RotationConvention, double>> tried;
};

/// Searches all 16 rotation-axis pairs and returns the best convention.
/// Throws kCalibrationFailed when no pair reaches `min_score`.
CalibrationResult calibrate_rotations(const GkpCode& code, SbsParams params, double min_score = 0.98);

/// Per-round log entry.
struct SbsRecord {
  /// Free-form label of the sweep point the round belongs to.
  std::string point;
  int round = 0;
  /// "gg" for post-selected rounds, "all" for the summed channel.
  std::string syndrome;
  std::string outcome_model;
  double pre_weight = 0.0;
  double post_weight = 0.0;
  /// Conditional probability of this round's reported outcome.
  double round_prob = 0.0;
};

struct SbsRunResult {
  /// Normalized output state.
  OscillatorState state = OscillatorState::fock(0, 2);
  double success_prob = 1.0;
  int rounds = 0;
  /// Accumulated Pauli frame (identity when not post-selecting).
  Matrix2 frame = Matrix2::Identity();
  std::vector<SbsRecord> records;
};

/// One round on an unnormalized density matrix.
Matrix apply_round(const Matrix& rho, const SbsChannel& channel, bool postselect);

/// N rounds. With post-selection the weight of the all-g history is the success
/// probability; throws kPostSelectionStarved below 1e-12.
SbsRunResult apply_rounds(const OscillatorState& rho, const SbsChannel& channel, int n_rounds, bool postselect);

struct SteadyStateResult {
  OscillatorState state = OscillatorState::fock(0, 2);
  int rounds_used = 0;
  bool converged = false;
  double success_prob = 1.0;
  Matrix2 frame = Matrix2::Identity();
  /// Trace distance between the states after rounds r and r - 2 (same Pauli
  /// frame), for r = 2, 3, ...
  std::vector<double> distances;
};

/// Post-selected rounds until two states in the same Pauli frame are within
/// `tol` in trace distance. Not converging within `max_rounds` is reported,
/// not thrown.
SteadyStateResult steady_state_rounds(const OscillatorState& rho, const SbsChannel& channel, double tol,
                                      int max_rounds);

}  // namespace gkpkerr
