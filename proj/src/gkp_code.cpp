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

#include "gkpkerr/gkp_code.hpp"

#include <cmath>

#include "gkpkerr/errors.hpp"
#include "gkpkerr/gates.hpp"

namespace gkpkerr {

int default_dim(double delta) {
  if (std::abs(delta - 0.36) < 1e-12) return 60;
  if (std::abs(delta - 0.25) < 1e-12) return 100;
  if (std::abs(delta - 0.15) < 1e-12) return 240;
  // Codeword weights fall off as exp(-2 delta^2 n); pick the first multiple
  // of 20 whose tail is below the default tolerance.
  for (int dim = 40; dim <= 1000; dim += 20) {
    if (std::exp(-2.0 * delta * delta * (dim - kDefaultInteriorMargin)) < 0.1 * kDefaultTailTolerance) return dim;
  }
  return 1000;
}

RealVector hermite_functions(int dim, double x) {
  RealVector h(dim);
  h(0) = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (dim > 1) h(1) = std::sqrt(2.0) * x * h(0);
  for (int n = 2; n < dim; ++n) {
    h(n) = std::sqrt(2.0 / n) * x * h(n - 1) - std::sqrt((n - 1.0) / n) * h(n - 2);
  }
  return h;
}

LogicalLabel parse_logical_label(const std::string& text) {
  if (text == "0") return LogicalLabel::kZero;
  if (text == "1") return LogicalLabel::kOne;
  if (text == "+") return LogicalLabel::kPlus;
  if (text == "-") return LogicalLabel::kMinus;
  if (text == "+i" || text == "+Y") return LogicalLabel::kPlusY;
  if (text == "-i" || text == "-Y") return LogicalLabel::kMinusY;
  if (text == "+H") return LogicalLabel::kPlusH;
  if (text == "-H") return LogicalLabel::kMinusH;
  throw Error(ErrorKind::kInvalidArgument, "unknown logical label '" + text + "'");
}

std::string to_string(LogicalLabel label) {
  switch (label) {
    case LogicalLabel::kZero: return "0";
    case LogicalLabel::kOne: return "1";
    case LogicalLabel::kPlus: return "+";
    case LogicalLabel::kMinus: return "-";
    case LogicalLabel::kPlusY: return "+Y";
    case LogicalLabel::kMinusY: return "-Y";
    case LogicalLabel::kPlusH: return "+H";
    case LogicalLabel::kMinusH: return "-H";
  }
  return "?";
}

namespace {

// Envelope-damped Dirac comb sum_j E |q = 2 sqrt(pi) (j + mu/2)>, unnormalized.
RealVector damped_comb(double delta, int dim, int mu) {
  RealVector sum = RealVector::Zero(dim);
  const double spacing = 2.0 * kSqrtPi;
  // Hermite functions below the truncation vanish beyond the outermost
  // turning point; stop once a whole shell adds less than 1e-14 relative.
  const double turning = std::sqrt(2.0 * dim + 1.0);
  for (int j = 0;; ++j) {
    RealVector shell = RealVector::Zero(dim);
    const double xp = spacing * (j + 0.5 * mu);
    shell += hermite_functions(dim, xp);
    const double xm = spacing * (-j - 1 + 0.5 * mu);
    shell += hermite_functions(dim, xm);
    sum += shell;
    const double outer = std::min(std::abs(xp), std::abs(xm));
    if (outer > turning && shell.norm() < 1e-14 * sum.norm()) break;
    if (j > 10000) throw Error(ErrorKind::kNumeric, "Dirac comb sum failed to converge");
  }
  for (int n = 0; n < dim; ++n) sum(n) *= std::exp(-delta * delta * n);
  return sum;
}

}  // namespace

GkpCode GkpCode::build(double delta, int dim, double tail_tolerance) {
  if (!(delta > 0.0 && delta <= 0.6)) {
    throw Error(ErrorKind::kInvalidArgument, "envelope delta must lie in (0, 0.6], got " + std::to_string(delta));
  }
  if (dim < 2) throw Error(ErrorKind::kInvalidDimension, "Fock truncation must be >= 2");

  GkpCode code;
  code.delta_ = delta;
  code.dim_ = dim;
  const int margin = std::min(kDefaultInteriorMargin, dim - 1);
  for (int mu = 0; mu < 2; ++mu) {
    const RealVector comb = damped_comb(delta, dim, mu);
    const double norm = comb.norm();
    code.norm_consts_[mu] = 1.0 / norm;
    code.codewords_[mu] = (comb / norm).cast<Complex>();
    code.tail_weights_[mu] = code.codewords_[mu].tail(margin).squaredNorm();
  }
  const double tail = std::max(code.tail_weights_[0], code.tail_weights_[1]);
  if (tail > tail_tolerance) {
    int suggested = dim;
    while (std::exp(-2.0 * delta * delta * (suggested - margin)) * (suggested - margin) > tail_tolerance) suggested += 10;
    throw Error(ErrorKind::kTruncation, "codeword tail weight " + std::to_string(tail) + " at dim " +
                                            std::to_string(dim) + " exceeds " + std::to_string(tail_tolerance) +
                                            "; try dim >= " + std::to_string(suggested));
  }

  Vector env(dim);
  for (int n = 0; n < dim; ++n) env(n) = std::exp(-delta * delta * n);
  code.envelope_ = FockOperator::diagonal(env, OperatorKind::kHermitian);

  const FockOperator q = position_op(dim);
  const FockOperator p = momentum_op(dim);
  code.stabilizer_q_ = expm(q, Complex(0.0, 2.0 * kSqrtPi));
  code.stabilizer_p_ = expm(p, Complex(0.0, -2.0 * kSqrtPi));
  code.logical_x_ = expm(p, Complex(0.0, -kSqrtPi));
  code.logical_z_ = expm(q, Complex(0.0, kSqrtPi));
  return code;
}

Matrix lowdin_orthonormalize(const Matrix& columns) {
  const Matrix gram = columns.adjoint() * columns;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorKind::kNumeric, "Lowdin orthonormalization of a rank-deficient family");
  }
  const Matrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  return columns * inv_sqrt;
}

Eigen::MatrixX2cd GkpCode::lowdin_codewords() const {
  Matrix pair(dim_, 2);
  pair.col(0) = codewords_[0];
  pair.col(1) = codewords_[1];
  return lowdin_orthonormalize(pair);
}

OscillatorState logical_state(const GkpCode& code, LogicalLabel label) {
  const Vector& zero = code.codeword(0);
  const Vector& one = code.codeword(1);
  const Complex i(0.0, 1.0);
  switch (label) {
    case LogicalLabel::kZero: return OscillatorState::from_ket(zero);
    case LogicalLabel::kOne: return OscillatorState::from_ket(one);
    case LogicalLabel::kPlus: return OscillatorState::from_ket(zero + one);
    case LogicalLabel::kMinus: return OscillatorState::from_ket(zero - one);
    case LogicalLabel::kPlusY: return OscillatorState::from_ket(zero + i * one);
    case LogicalLabel::kMinusY: return OscillatorState::from_ket(zero - i * one);
    case LogicalLabel::kPlusH:
    case LogicalLabel::kMinusH: {
      const int residue = label == LogicalLabel::kPlusH ? 0 : 2;
      Vector ket = Vector::Zero(code.dim());
      for (int n = residue; n < code.dim(); n += 4) ket(n) = zero(n);
      return OscillatorState::from_ket(std::move(ket));
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown logical label");
}

double envelope_commutator_norm(const GkpCode& code, const FockOperator& op) {
  if (op.dim() != code.dim()) throw Error(ErrorKind::kInvalidDimension, "operator does not match code truncation");
  return max_abs(commutator(op, code.envelope()).matrix());
}

Matrix2 logical_matrix(const GkpCode& code, const FockOperator& op) {
  const Eigen::MatrixX2cd basis = code.lowdin_codewords();
  return basis.adjoint() * op.matrix() * basis;
}

double fourier_hadamard_error(const GkpCode& code) {
  const Matrix2 m = logical_matrix(code, fourier_gate(code.dim()));
  Matrix2 h;
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const Complex overlap = (h.adjoint() * m).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (m - phase * h).cwiseAbs().maxCoeff();
}

}  // namespace gkpkerr
