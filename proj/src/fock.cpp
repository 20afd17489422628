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

#include "gkpkerr/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kNumeric: return "numeric";
    case ErrorKind::kTruncation: return "truncation";
    case ErrorKind::kCalibrationFailed: return "calibration-failed";
    case ErrorKind::kPostSelectionStarved: return "post-selection-starved";
    case ErrorKind::kIntegratorFailure: return "integrator-failure";
    case ErrorKind::kBasisConstruction: return "basis-construction";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

namespace {

void require_dim(int dim) {
  if (dim < 2) {
    throw Error(ErrorKind::kInvalidDimension, "Fock truncation must be >= 2, got " + std::to_string(dim));
  }
}

void require_same_dim(const FockOperator& a, const FockOperator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kInvalidDimension, "operator dimensions differ: " + std::to_string(a.dim()) +
                                                  " vs " + std::to_string(b.dim()));
  }
}

}  // namespace

FockOperator::FockOperator(Matrix data, OperatorKind kind, int interior_margin)
    : data_(std::move(data)), kind_(kind), margin_(interior_margin) {
  if (data_.rows() != data_.cols()) {
    throw Error(ErrorKind::kInvalidDimension, "Fock operator must be square");
  }
  require_dim(static_cast<int>(data_.rows()));
  if (margin_ < 0) throw Error(ErrorKind::kInvalidArgument, "interior margin must be >= 0");
  margin_ = std::min(margin_, dim() - 1);
}

FockOperator FockOperator::identity(int dim) {
  require_dim(dim);
  return FockOperator(Matrix::Identity(dim, dim), OperatorKind::kUnitary);
}

FockOperator FockOperator::diagonal(const Vector& entries, OperatorKind kind) {
  return FockOperator(Matrix(entries.asDiagonal()), kind);
}

bool FockOperator::is_diagonal() const {
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      if (i != j && data_(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

FockOperator FockOperator::adjoint() const {
  FockOperator out(data_.adjoint(), kind_, margin_);
  out.truncation_warning_ = truncation_warning_;
  return out;
}

FockOperator FockOperator::with_margin(int margin) const {
  FockOperator out(data_, kind_, margin);
  out.truncation_warning_ = truncation_warning_;
  return out;
}

FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs) {
  require_same_dim(lhs, rhs);
  const bool unitary = lhs.kind() == OperatorKind::kUnitary && rhs.kind() == OperatorKind::kUnitary;
  FockOperator out(lhs.matrix() * rhs.matrix(), unitary ? OperatorKind::kUnitary : OperatorKind::kGeneral,
                   std::max(lhs.interior_margin(), rhs.interior_margin()));
  if (lhs.truncation_warning() || rhs.truncation_warning()) out.flag_truncation_warning();
  return out;
}

FockOperator operator+(const FockOperator& lhs, const FockOperator& rhs) {
  require_same_dim(lhs, rhs);
  const bool herm = lhs.kind() == OperatorKind::kHermitian && rhs.kind() == OperatorKind::kHermitian;
  return FockOperator(lhs.matrix() + rhs.matrix(), herm ? OperatorKind::kHermitian : OperatorKind::kGeneral,
                      std::max(lhs.interior_margin(), rhs.interior_margin()));
}

FockOperator operator-(const FockOperator& lhs, const FockOperator& rhs) {
  require_same_dim(lhs, rhs);
  const bool herm = lhs.kind() == OperatorKind::kHermitian && rhs.kind() == OperatorKind::kHermitian;
  return FockOperator(lhs.matrix() - rhs.matrix(), herm ? OperatorKind::kHermitian : OperatorKind::kGeneral,
                      std::max(lhs.interior_margin(), rhs.interior_margin()));
}

FockOperator operator*(Complex scale, const FockOperator& op) {
  const bool herm = op.kind() == OperatorKind::kHermitian && scale.imag() == 0.0;
  return FockOperator(scale * op.matrix(), herm ? OperatorKind::kHermitian : OperatorKind::kGeneral,
                      op.interior_margin());
}

Vector operator*(const FockOperator& op, const Vector& ket) {
  if (ket.size() != op.dim()) throw Error(ErrorKind::kInvalidDimension, "ket size does not match operator");
  return op.matrix() * ket;
}

LadderOps ladder_ops(int dim) {
  require_dim(dim);
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Vector number(dim);
  for (int n = 0; n < dim; ++n) number(n) = static_cast<double>(n);
  Matrix adag = a.adjoint();
  return {FockOperator(a), FockOperator(adag), FockOperator::diagonal(number, OperatorKind::kHermitian)};
}

FockOperator position_op(int dim) {
  const auto ops = ladder_ops(dim);
  return FockOperator((ops.a.matrix() + ops.adag.matrix()) / std::sqrt(2.0), OperatorKind::kHermitian);
}

FockOperator momentum_op(int dim) {
  const auto ops = ladder_ops(dim);
  return FockOperator(Complex(0.0, 1.0) * (ops.adag.matrix() - ops.a.matrix()) / std::sqrt(2.0),
                      OperatorKind::kHermitian);
}

FockOperator expm(const FockOperator& op, Complex scale) {
  if (!op.matrix().allFinite() || !std::isfinite(scale.real()) || !std::isfinite(scale.imag())) {
    throw Error(ErrorKind::kNumeric, "expm: non-finite input");
  }
  const bool anti_hermitian = (op.kind() == OperatorKind::kHermitian && scale.real() == 0.0);
  const OperatorKind kind = anti_hermitian ? OperatorKind::kUnitary : OperatorKind::kGeneral;
  if (op.is_diagonal()) {
    Vector d = (scale * op.diagonal_entries().array()).exp();
    return FockOperator(Matrix(d.asDiagonal()), kind, op.interior_margin());
  }
  Matrix scaled = scale * op.matrix();
  Matrix out = scaled.exp();
  if (!out.allFinite()) throw Error(ErrorKind::kNumeric, "expm: result is not finite");
  return FockOperator(std::move(out), kind, op.interior_margin());
}

FockOperator displacement(Complex alpha, int dim) {
  require_dim(dim);
  const auto ops = ladder_ops(dim);
  Matrix gen = alpha * ops.adag.matrix() - std::conj(alpha) * ops.a.matrix();
  // The generator is anti-Hermitian: i * (Hermitian).
  FockOperator herm(Complex(0.0, -1.0) * gen, OperatorKind::kHermitian);
  FockOperator out = expm(herm, Complex(0.0, 1.0));
  if (std::norm(alpha) > 0.25 * dim) out.flag_truncation_warning();
  return out;
}

FockOperator displacement_qp(double dq, double dp, int dim) {
  return displacement(Complex(dq, dp) / std::sqrt(2.0), dim);
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) {
  require_same_dim(a, b);
  return FockOperator(a.matrix() * b.matrix() - b.matrix() * a.matrix(), OperatorKind::kGeneral,
                      std::max(a.interior_margin(), b.interior_margin()));
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double interior_max_abs(const Matrix& a, int interior_dim) {
  const int k = std::min<int>(interior_dim, static_cast<int>(a.rows()));
  return max_abs(a.topLeftCorner(k, k));
}

double unitarity_defect(const FockOperator& u) {
  const Matrix prod = u.matrix().adjoint() * u.matrix();
  const int k = u.interior_dim();
  return max_abs(prod.topLeftCorner(k, k) - Matrix::Identity(k, k));
}

double hermiticity_defect(const Matrix& a) { return max_abs(a - a.adjoint()); }

// ---------------------------------------------------------------------------
// OscillatorState

OscillatorState OscillatorState::from_ket(Vector ket, bool normalize) {
  require_dim(static_cast<int>(ket.size()));
  if (!ket.allFinite()) throw Error(ErrorKind::kNumeric, "ket has non-finite amplitudes");
  const double norm = ket.norm();
  if (normalize) {
    if (norm == 0.0) throw Error(ErrorKind::kNumeric, "cannot normalize the zero ket");
    ket /= norm;
  } else if (std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorKind::kNumeric, "ket is not normalized: |psi| = " + std::to_string(norm));
  }
  return OscillatorState(StateKind::kKet, std::move(ket), Matrix());
}

OscillatorState OscillatorState::from_density(Matrix rho, double expected_trace, double trace_tol) {
  if (rho.rows() != rho.cols()) throw Error(ErrorKind::kInvalidDimension, "density matrix must be square");
  require_dim(static_cast<int>(rho.rows()));
  if (!rho.allFinite()) throw Error(ErrorKind::kNumeric, "density matrix has non-finite entries");
  if (hermiticity_defect(rho) > 1e-12 * std::max(1.0, expected_trace)) {
    // Symmetrize tiny roundoff; reject anything larger.
    if (hermiticity_defect(rho) > 1e-9) throw Error(ErrorKind::kNumeric, "density matrix is not Hermitian");
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (std::abs(tr - expected_trace) > trace_tol) {
    throw Error(ErrorKind::kNumeric, "density matrix trace " + std::to_string(tr) + " differs from " +
                                         std::to_string(expected_trace));
  }
  return OscillatorState(StateKind::kDensity, Vector(), std::move(rho));
}

OscillatorState OscillatorState::fock(int n, int dim) {
  require_dim(dim);
  if (n < 0 || n >= dim) throw Error(ErrorKind::kInvalidArgument, "Fock level outside truncation");
  Vector ket = Vector::Zero(dim);
  ket(n) = 1.0;
  return from_ket(std::move(ket));
}

OscillatorState OscillatorState::coherent(Complex alpha, int dim) {
  require_dim(dim);
  // Analytic amplitudes, renormalized on the truncated space.
  Vector ket(dim);
  ket(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) ket(n) = ket(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return from_ket(std::move(ket));
}

int OscillatorState::dim() const {
  return kind_ == StateKind::kKet ? static_cast<int>(ket_.size()) : static_cast<int>(rho_.rows());
}

double OscillatorState::trace() const {
  return kind_ == StateKind::kKet ? ket_.squaredNorm() : rho_.trace().real();
}

const Vector& OscillatorState::ket() const {
  if (kind_ != StateKind::kKet) throw Error(ErrorKind::kInvalidArgument, "state is not pure");
  return ket_;
}

Matrix OscillatorState::density() const {
  if (kind_ == StateKind::kKet) return ket_ * ket_.adjoint();
  return rho_;
}

OscillatorState OscillatorState::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw Error(ErrorKind::kNumeric, "cannot normalize a state with zero trace");
  if (kind_ == StateKind::kKet) return OscillatorState(kind_, ket_ / std::sqrt(tr), Matrix());
  return OscillatorState(kind_, Vector(), rho_ / tr);
}

double OscillatorState::expectation(const FockOperator& op) const {
  if (op.dim() != dim()) throw Error(ErrorKind::kInvalidDimension, "operator/state dimension mismatch");
  if (kind_ == StateKind::kKet) return ket_.dot(op.matrix() * ket_).real();
  return (op.matrix() * rho_).trace().real();
}

RealVector OscillatorState::photon_distribution() const {
  if (kind_ == StateKind::kKet) return ket_.cwiseAbs2();
  return rho_.diagonal().real();
}

OscillatorState apply(const FockOperator& op, const OscillatorState& state) {
  if (op.dim() != state.dim()) throw Error(ErrorKind::kInvalidDimension, "operator/state dimension mismatch");
  if (state.is_pure()) return OscillatorState::from_ket(op.matrix() * state.ket(), /*normalize=*/true);
  Matrix rho = op.matrix() * state.density() * op.matrix().adjoint();
  const double tr = rho.trace().real();
  return OscillatorState::from_density(rho / tr);
}

double fidelity(const OscillatorState& state, const Vector& pure_target) {
  if (pure_target.size() != state.dim()) throw Error(ErrorKind::kInvalidDimension, "target dimension mismatch");
  if (state.is_pure()) return std::norm(pure_target.dot(state.ket()));
  return pure_target.dot(state.density() * pure_target).real();
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
  Matrix diff = rho - sigma;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const Matrix& rho) {
  Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------------------
// Hybrid ancilla (x) oscillator

HybridOperator::HybridOperator(int osc_dim) : blocks_(4, Matrix::Zero(osc_dim, osc_dim)) { require_dim(osc_dim); }

HybridOperator HybridOperator::identity(int osc_dim) { return ancilla(Matrix2::Identity(), osc_dim); }

HybridOperator HybridOperator::ancilla(const Matrix2& u, int osc_dim) {
  HybridOperator out(osc_dim);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block(i, j) = u(i, j) * Matrix::Identity(osc_dim, osc_dim);
  }
  return out;
}

HybridOperator HybridOperator::conditional(const Matrix& on_zero, const Matrix& on_one) {
  if (on_zero.rows() != on_one.rows()) throw Error(ErrorKind::kInvalidDimension, "conditional block mismatch");
  HybridOperator out(static_cast<int>(on_zero.rows()));
  out.block(0, 0) = on_zero;
  out.block(1, 1) = on_one;
  return out;
}

Matrix HybridOperator::dense() const {
  const int d = osc_dim();
  Matrix out(2 * d, 2 * d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block(i * d, j * d, d, d) = block(i, j);
  }
  return out;
}

HybridOperator operator*(const HybridOperator& lhs, const HybridOperator& rhs) {
  if (lhs.osc_dim() != rhs.osc_dim()) throw Error(ErrorKind::kInvalidDimension, "hybrid dimension mismatch");
  HybridOperator out(lhs.osc_dim());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block(i, j).noalias() = lhs.block(i, 0) * rhs.block(0, j);
      out.block(i, j).noalias() += lhs.block(i, 1) * rhs.block(1, j);
    }
  }
  return out;
}

HybridOperator conditional_displacement(Complex c, int osc_dim) {
  return HybridOperator::conditional(displacement(0.5 * c, osc_dim).matrix(),
                                     displacement(-0.5 * c, osc_dim).matrix());
}

Matrix ancilla_matrix_element(const HybridOperator& u, const Qubit& bra, const Qubit& ket) {
  const int d = u.osc_dim();
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Complex w = std::conj(bra(i)) * ket(j);
      if (w != Complex(0.0)) out += w * u.block(i, j);
    }
  }
  return out;
}

HybridState HybridState::product(const Qubit& ancilla, const OscillatorState& osc) {
  const Qubit anc = ancilla.normalized();
  const Matrix2 rho_a = anc * anc.adjoint();
  const Matrix rho_o = osc.density();
  const int d = osc.dim();
  Matrix rho(2 * d, 2 * d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) rho.block(i * d, j * d, d, d) = rho_a(i, j) * rho_o;
  }
  return HybridState(d, std::move(rho));
}

HybridState HybridState::evolved(const HybridOperator& u) const {
  const Matrix dense = u.dense();
  return HybridState(osc_dim_, dense * rho_ * dense.adjoint());
}

std::pair<double, OscillatorState> HybridState::measure(const Qubit& outcome) const {
  const Qubit o = outcome.normalized();
  const int d = osc_dim_;
  Matrix cond = Matrix::Zero(d, d);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) cond += std::conj(o(i)) * o(j) * rho_.block(i * d, j * d, d, d);
  }
  const double prob = cond.trace().real();
  if (!(prob > 0.0)) throw Error(ErrorKind::kNumeric, "measurement outcome has zero probability");
  return {prob, OscillatorState::from_density(cond / prob)};
}

OscillatorState HybridState::partial_trace_ancilla() const {
  const int d = osc_dim_;
  Matrix rho = rho_.topLeftCorner(d, d) + rho_.bottomRightCorner(d, d);
  return OscillatorState::from_density(rho, rho.trace().real());
}

ConvergenceReport check_truncation(const std::function<double(int)>& observable, int dim, double tol, int extra) {
  ConvergenceReport report;
  report.value = observable(dim);
  report.value_enlarged = observable(dim + extra);
  report.difference = std::abs(report.value - report.value_enlarged);
  report.converged = report.difference <= tol;
  return report;
}

}  // namespace gkpkerr
