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

#include "gkpkerr/gates.hpp"

#include <cmath>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

namespace {

FockOperator diagonal_phase(int dim, const std::function<double(int)>& phase) {
  if (dim < 2) throw Error(ErrorKind::kInvalidDimension, "Fock truncation must be >= 2");
  Vector d(dim);
  for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, phase(n));
  return FockOperator::diagonal(d, OperatorKind::kUnitary);
}

}  // namespace

FockOperator kerr_unitary(int dim) {
  // n^2 mod 16 keeps the argument small and the phases exact.
  return diagonal_phase(dim, [](int n) { return kPi * static_cast<double>((n * n) % 16) / 8.0; });
}

FockOperator fourier_gate(int dim) {
  return diagonal_phase(dim, [](int n) { return kPi * static_cast<double>(n % 4) / 2.0; });
}

FockOperator parity_gate(int dim) {
  return diagonal_phase(dim, [](int n) { return kPi * static_cast<double>(n % 2); });
}

FockOperator kerr_hamiltonian(int dim, double kerr_rate) {
  if (dim < 2) throw Error(ErrorKind::kInvalidDimension, "Fock truncation must be >= 2");
  Vector d(dim);
  for (int n = 0; n < dim; ++n) d(n) = 0.5 * kerr_rate * static_cast<double>(n) * n;
  return FockOperator::diagonal(d, OperatorKind::kHermitian);
}

double kerr_gate_time(double kerr_rate) {
  if (kerr_rate == 0.0) throw Error(ErrorKind::kInvalidArgument, "Kerr rate must be non-zero");
  return kPi / (4.0 * std::abs(kerr_rate));
}

CubicCoefficients CubicCoefficients::t_gate() {
  CubicCoefficients c;
  c.cubic = (kPi / 4.0) * 2.0 / (kPi * kSqrtPi);
  c.quadratic = (kPi / 4.0) / kPi;
  c.linear = -(kPi / 4.0) * 2.0 / kSqrtPi;
  return c;
}

FockOperator cubic_gate(int dim, const CubicCoefficients& coeffs) {
  const FockOperator q = position_op(dim);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(q.matrix().real());
  const RealVector& x = es.eigenvalues();
  Vector phases(dim);
  for (int k = 0; k < dim; ++k) phases(k) = std::polar(1.0, coeffs.phase(x(k)));
  const Matrix v = es.eigenvectors().cast<Complex>();
  FockOperator out(v * phases.asDiagonal() * v.adjoint(), OperatorKind::kUnitary);
  const double half_range = 0.5 * x.cwiseAbs().maxCoeff();
  const double kick = std::max(std::abs(coeffs.slope(half_range)), std::abs(coeffs.slope(-half_range)));
  if (kick > 0.5 * std::sqrt(2.0 * dim + 1.0)) out.flag_truncation_warning();
  return out;
}

Matrix2 pauli_x() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix2 pauli_y() {
  Matrix2 m;
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

Matrix2 pauli_z() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

LogicalTarget sqrt_h_target() {
  const Complex i(0.0, 1.0);
  const Matrix2 axis = (pauli_x() + pauli_z()) / std::sqrt(2.0);
  const Matrix2 m =
      std::exp(i * kPi / 4.0) * (std::cos(kPi / 4.0) * Matrix2::Identity() - i * std::sin(kPi / 4.0) * axis);
  return {"sqrtH", m};
}

LogicalTarget hadamard_target() { return {"H", (pauli_x() + pauli_z()) / std::sqrt(2.0)}; }

LogicalTarget t_target() {
  Matrix2 m = Matrix2::Identity();
  m(1, 1) = std::polar(1.0, kPi / 4.0);
  return {"T", m};
}

Qubit qubit_state(const std::string& label) {
  const Complex i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  if (label == "0") return Qubit(1.0, 0.0);
  if (label == "1") return Qubit(0.0, 1.0);
  if (label == "+") return Qubit(r, r);
  if (label == "-") return Qubit(r, -r);
  if (label == "+i" || label == "+Y") return Qubit(r, i * r);
  if (label == "-i" || label == "-Y") return Qubit(r, -i * r);
  if (label == "+H") return Qubit(std::cos(kPi / 8.0), std::sin(kPi / 8.0));
  if (label == "-H") return Qubit(-std::sin(kPi / 8.0), std::cos(kPi / 8.0));
  throw Error(ErrorKind::kInvalidArgument, "unknown qubit label '" + label + "'");
}

Qubit magic_target() { return sqrt_h_target().matrix * qubit_state("+i"); }

KerrOperatingPoint operating_point(double kerr_over_2pi_hz, double cavity_t1_s) {
  if (!(cavity_t1_s > 0.0)) throw Error(ErrorKind::kInvalidArgument, "cavity T1 must be positive");
  KerrOperatingPoint op;
  op.kerr_over_2pi_hz = kerr_over_2pi_hz;
  op.cavity_t1_s = cavity_t1_s;
  op.gate_time_s = kerr_gate_time(2.0 * kPi * kerr_over_2pi_hz);
  op.kappa_per_s = 1.0 / cavity_t1_s;
  op.gamma = -std::expm1(-op.kappa_per_s * op.gate_time_s);
  return op;
}

}  // namespace gkpkerr
