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
#include <vector>

#include "gkpkerr/fock.hpp"

namespace gkpkerr {

/// Photon loss (rate kappa) and dephasing (rate kappa_phi) over `duration`.
struct NoiseSpec {
  double kappa = 0.0;
  double kappa_phi = 0.0;
  double duration = 0.0;

  /// Per-photon loss probability 1 - exp(-kappa * duration).
  double gamma() const;
  static NoiseSpec from_gamma(double gamma, double duration, double kappa_phi = 0.0);
  void validate() const;
};

/// kappa = -ln(1 - gamma) / duration. Throws for gamma outside [0, 1).
double gamma_to_kappa(double gamma, double duration);
double kappa_to_gamma(double kappa, double duration);

struct IntegratorOptions {
  /// Lower bound on the number of RK4 steps over the evolution.
  int min_steps = 2000;
  /// Target product of step size and the right-hand side's spectral bound.
  double safety = 0.05;
  /// Multiplies the chosen step (0.5 halves it); used for convergence checks.
  double step_scale = 1.0;
  double trace_tol = 1e-8;
  double negativity_tol = 1e-7;
};

struct EvolutionResult {
  OscillatorState state = OscillatorState::fock(0, 2);
  long steps = 0;
  double step = 0.0;
  double max_trace_drift = 0.0;
  double min_eigenvalue = 0.0;
  double wall_time_s = 0.0;
};

/// Integrates d rho/dt = -i[H, rho] + kappa D[a] rho + kappa_phi D[n] rho with
/// fixed-step RK4. Diagonal Hamiltonians are integrated in their interaction
/// frame with elementwise right-hand sides, which keeps every step O(D^2).
/// Throws kIntegratorFailure when the trace drifts or the state loses
/// positivity beyond the options' tolerances.
EvolutionResult lindblad_evolve(const OscillatorState& rho0, const FockOperator& hamiltonian, const NoiseSpec& noise,
                                const IntegratorOptions& options = {});

using KrausSet = std::vector<Matrix>;

/// Pure-loss channel with per-photon loss probability gamma (amplitude damping).
KrausSet loss_channel(int dim, double gamma);
Matrix apply_kraus(const KrausSet& kraus, const Matrix& rho);
/// max |sum K^dag K - I| on the leading `interior_dim` block.
double kraus_completeness_defect(const KrausSet& kraus, int interior_dim);

struct TrajectoryResult {
  EvolutionResult evolution;
  /// Elementwise standard error of the trajectory-averaged density matrix.
  RealMatrix standard_error;
  /// Final normalized ket of every trajectory, in trajectory order.
  std::vector<Vector> finals;
  long total_jumps = 0;
};

/// Quantum-jump unraveling of the same Lindbladian. Trajectory k draws from
/// its own RNG stream seeded by (seed, k), so results do not depend on how
/// trajectories are scheduled across threads.
TrajectoryResult trajectory_oracle(const OscillatorState& rho0, const FockOperator& hamiltonian,
                                   const NoiseSpec& noise, int n_traj, std::uint64_t seed, int threads = 0);

/// Mean and standard error of a ratio estimator sum(num_k) / sum(den_k) over
/// trajectories (delta method).
struct RatioEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};
RatioEstimate ratio_estimate(const std::vector<double>& numerators, const std::vector<double>& denominators);

}  // namespace gkpkerr
