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

#include "gkpkerr/fock.hpp"

namespace gkpkerr {

/// Default tail-weight tolerance for the codeword truncation check: the weight
/// of |mu_delta> on the last `interior_margin` Fock levels must stay below it.
inline constexpr double kDefaultTailTolerance = 1e-4;

/// Default Fock truncation for an envelope size.
int default_dim(double delta);

/// Position eigenket <n|q = x> for n < dim (normalized Hermite functions).
RealVector hermite_functions(int dim, double x);

enum class LogicalLabel { kZero, kOne, kPlus, kMinus, kPlusY, kMinusY, kPlusH, kMinusH };

LogicalLabel parse_logical_label(const std::string& text);
std::string to_string(LogicalLabel label);

/// Square-lattice finite-energy GKP code on a truncated Fock space.
class GkpCode {
 public:
  /// Throws kTruncation (with a suggested dimension) when the codeword tail
  /// weight at `dim` exceeds `tail_tolerance`.
  static GkpCode build(double delta, int dim, double tail_tolerance = kDefaultTailTolerance);
  static GkpCode build(double delta) { return build(delta, default_dim(delta)); }

  double delta() const { return delta_; }
  int dim() const { return dim_; }
  /// |0_delta> (mu = 0) or |1_delta> (mu = 1), unit norm, real Fock amplitudes.
  const Vector& codeword(int mu) const { return codewords_[mu]; }
  /// Normalization constant N_delta of each codeword relative to the raw
  /// envelope-damped Dirac comb.
  double norm_const(int mu) const { return norm_consts_[mu]; }
  double tail_weight(int mu) const { return tail_weights_[mu]; }

  const FockOperator& envelope() const { return envelope_; }
  const FockOperator& stabilizer_q() const { return stabilizer_q_; }
  const FockOperator& stabilizer_p() const { return stabilizer_p_; }
  const FockOperator& logical_x() const { return logical_x_; }
  const FockOperator& logical_z() const { return logical_z_; }

  /// <0_delta|1_delta>.
  Complex codeword_overlap() const { return codewords_[0].dot(codewords_[1]); }
  /// Columns are the Lowdin (symmetric) orthonormalization of {|0_delta>, |1_delta>}.
  Eigen::MatrixX2cd lowdin_codewords() const;

 private:
  GkpCode() = default;

  double delta_ = 0.0;
  int dim_ = 0;
  std::array<Vector, 2> codewords_;
  std::array<double, 2> norm_consts_{};
  std::array<double, 2> tail_weights_{};
  FockOperator envelope_ = FockOperator::identity(2);
  FockOperator stabilizer_q_ = FockOperator::identity(2);
  FockOperator stabilizer_p_ = FockOperator::identity(2);
  FockOperator logical_x_ = FockOperator::identity(2);
  FockOperator logical_z_ = FockOperator::identity(2);
};

/// Pauli and Hadamard eigenstates built from the codewords. Hadamard
/// eigenstates are Fock-support projections of |0_delta> onto {4n} (+H) and
/// {4n+2} (-H).
OscillatorState logical_state(const GkpCode& code, LogicalLabel label);

/// max |[op, E_delta]| entrywise.
double envelope_commutator_norm(const GkpCode& code, const FockOperator& op);

/// Matrix of `op` in the Lowdin-orthonormalized codeword basis.
Matrix2 logical_matrix(const GkpCode& code, const FockOperator& op);

/// Distance of the Lowdin-basis Fourier matrix from the Hadamard matrix,
/// minimized over a global phase.
double fourier_hadamard_error(const GkpCode& code);

/// Symmetric orthonormalization V (V^dag V)^{-1/2} of the columns of V.
Matrix lowdin_orthonormalize(const Matrix& columns);

}  // namespace gkpkerr
