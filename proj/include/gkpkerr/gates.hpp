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

#include <string>

#include "gkpkerr/fock.hpp"

namespace gkpkerr {

/// U_K = exp(i pi n^2 / 8), diagonal.
FockOperator kerr_unitary(int dim);

/// exp(i pi n / 2): Fourier transform, the logical Hadamard of square GKP.
FockOperator fourier_gate(int dim);

/// exp(i pi n).
FockOperator parity_gate(int dim);

/// H = K n^2 / 2. With K < 0 the evolution for t_K = pi / (4|K|) equals U_K.
FockOperator kerr_hamiltonian(int dim, double kerr_rate);

/// Kerr gate time pi / (4 |K|) for an angular Kerr rate K.
double kerr_gate_time(double kerr_rate);

/// Coefficients of phi(q) = linear q + quadratic q^2 + cubic q^3.
struct CubicCoefficients {
  double linear = 0.0;
  double quadratic = 0.0;
  double cubic = 0.0;

  /// T-gate polynomial for the square code: phi = (pi/4)(2x^3 + x^2 - 2x) with
  /// x = q / sqrt(pi), which evaluates to (pi/4)(k mod 2) mod 2 pi on the
  /// lattice points q = k sqrt(pi).
  static CubicCoefficients t_gate();
  double phase(double q) const { return ((cubic * q + quadratic) * q + linear) * q; }
  double slope(double q) const { return (3.0 * cubic * q + 2.0 * quadratic) * q + linear; }
};

/// exp(i phi(q)) built by diagonalizing the truncated position operator.
/// Flags a truncation warning when the momentum kick phi'(q) over the central
/// half of the q spectrum exceeds what the truncation resolves.
FockOperator cubic_gate(int dim, const CubicCoefficients& coeffs = CubicCoefficients::t_gate());

/// Named 2x2 logical unitary.
struct LogicalTarget {
  std::string name;
  Matrix2 matrix;
};

/// sqrt(H) with its global phase fixed so that sqrt(H)|+H> = |+H> and
/// sqrt(H)|-H> = i|-H>.
LogicalTarget sqrt_h_target();
LogicalTarget hadamard_target();
LogicalTarget t_target();

Matrix2 pauli_x();
Matrix2 pauli_y();
Matrix2 pauli_z();

/// Qubit Pauli/Hadamard eigenvectors; labels as for the oscillator states.
Qubit qubit_state(const std::string& label);

/// |H'> = sqrt(H)|+i>, the magic state the Kerr gate prepares.
Qubit magic_target();

/// Gate-time and loss bookkeeping for a physical operating point.
struct KerrOperatingPoint {
  double kerr_over_2pi_hz = 0.0;
  double cavity_t1_s = 0.0;
  double gate_time_s = 0.0;
  double kappa_per_s = 0.0;
  double gamma = 0.0;
};

KerrOperatingPoint operating_point(double kerr_over_2pi_hz, double cavity_t1_s);

/// Published figures for the cavity-SNAIL operating point, kept as metadata
/// next to the computed values.
struct OperatingPointReference {
  double kerr_over_2pi_hz = -20e3;
  double cavity_t1_s = 610e-6;
  double gate_time_s = 6.3e-6;
  double gamma = 1.07e-2;
};

}  // namespace gkpkerr
