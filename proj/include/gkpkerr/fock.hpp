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

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace gkpkerr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Qubit = Eigen::Vector2cd;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr int kDefaultInteriorMargin = 10;

enum class OperatorKind { kGeneral, kHermitian, kUnitary };

/// Dense operator on the truncated Fock space {|0>, ..., |dim-1>}.
///
/// The last `interior_margin` levels are treated as a buffer: identities that
/// hold for the untruncated operator (canonical commutation, unitarity of
/// displacements) are only asserted on the leading interior block.
class FockOperator {
 public:
  explicit FockOperator(Matrix data, OperatorKind kind = OperatorKind::kGeneral,
               int interior_margin = kDefaultInteriorMargin);

  static FockOperator identity(int dim);
  static FockOperator diagonal(const Vector& entries, OperatorKind kind = OperatorKind::kGeneral);

  int dim() const { return static_cast<int>(data_.rows()); }
  int interior_margin() const { return margin_; }
  int interior_dim() const { return std::max(dim() - margin_, 1); }
  OperatorKind kind() const { return kind_; }
  const Matrix& matrix() const { return data_; }
  bool is_diagonal() const;
  Vector diagonal_entries() const { return data_.diagonal(); }

  /// Leading interior block, the region where exactness claims apply.
  Eigen::Block<const Matrix> interior() const {
    return data_.topLeftCorner(interior_dim(), interior_dim());
  }

  FockOperator adjoint() const;
  FockOperator with_margin(int margin) const;

  /// Set when a construction knowingly exceeds what the truncation resolves.
  bool truncation_warning() const { return truncation_warning_; }
  FockOperator& flag_truncation_warning() {
    truncation_warning_ = true;
    return *this;
  }

 private:
  Matrix data_;
  OperatorKind kind_;
  int margin_;
  bool truncation_warning_ = false;
};

FockOperator operator*(const FockOperator& lhs, const FockOperator& rhs);
FockOperator operator+(const FockOperator& lhs, const FockOperator& rhs);
FockOperator operator-(const FockOperator& lhs, const FockOperator& rhs);
FockOperator operator*(Complex scale, const FockOperator& op);
Vector operator*(const FockOperator& op, const Vector& ket);

struct LadderOps {
  FockOperator a;
  FockOperator adag;
  FockOperator n;
};

/// Annihilation, creation and number operators; throws kInvalidDimension for dim < 2.
LadderOps ladder_ops(int dim);

/// q = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2), so [q, p] = i.
FockOperator position_op(int dim);
FockOperator momentum_op(int dim);

/// exp(scale * op). Diagonal operators are exponentiated entrywise.
FockOperator expm(const FockOperator& op, Complex scale);

/// D(alpha) = exp(alpha a^dag - alpha^* a). Shifts q by sqrt(2) Re(alpha) and p
/// by sqrt(2) Im(alpha). Flags a truncation warning when |alpha|^2 is not small
/// compared to dim.
FockOperator displacement(Complex alpha, int dim);

/// Displacement by (dq, dp) in quadrature units.
FockOperator displacement_qp(double dq, double dp, int dim);

FockOperator commutator(const FockOperator& a, const FockOperator& b);

/// max |A_ij| over the interior block of A.
double interior_max_abs(const Matrix& a, int interior_dim);
double max_abs(const Matrix& a);

/// max |U^dag U - I| on the interior block.
double unitarity_defect(const FockOperator& u);
double hermiticity_defect(const Matrix& a);

enum class StateKind { kKet, kDensity };

/// Pure ket or density matrix on the truncated Fock space.
class OscillatorState {
 public:
  static OscillatorState from_ket(Vector ket, bool normalize = true);
  /// `expected_trace` lets unnormalized post-selected states carry their weight.
  static OscillatorState from_density(Matrix rho, double expected_trace = 1.0,
                                      double trace_tol = 1e-8);
  static OscillatorState fock(int n, int dim);
  static OscillatorState coherent(Complex alpha, int dim);

  StateKind kind() const { return kind_; }
  bool is_pure() const { return kind_ == StateKind::kKet; }
  int dim() const;
  double trace() const;
  const Vector& ket() const;
  /// Density matrix view; builds |psi><psi| for kets.
  Matrix density() const;
  OscillatorState normalized() const;
  double expectation(const FockOperator& op) const;
  RealVector photon_distribution() const;

 private:
  OscillatorState(StateKind kind, Vector ket, Matrix rho)
      : kind_(kind), ket_(std::move(ket)), rho_(std::move(rho)) {}

  StateKind kind_;
  Vector ket_;
  Matrix rho_;
};

OscillatorState apply(const FockOperator& op, const OscillatorState& state);

/// Uhlmann fidelity when one side is pure: <psi|rho|psi>.
double fidelity(const OscillatorState& state, const Vector& pure_target);
double trace_distance(const Matrix& rho, const Matrix& sigma);
double min_eigenvalue(const Matrix& rho);

/// Operator on ancilla (2 levels) tensor oscillator, stored as a 2x2 grid of
/// oscillator blocks: block(i, j) = <i|U|j> for ancilla levels i, j.
class HybridOperator {
 public:
  explicit HybridOperator(int osc_dim);
  static HybridOperator identity(int osc_dim);
  /// Ancilla-only operator: u acting on the qubit, identity on the oscillator.
  static HybridOperator ancilla(const Matrix2& u, int osc_dim);
  /// |0><0| (x) on_zero + |1><1| (x) on_one.
  static HybridOperator conditional(const Matrix& on_zero, const Matrix& on_one);

  int osc_dim() const { return static_cast<int>(blocks_[0].rows()); }
  const Matrix& block(int i, int j) const { return blocks_[2 * i + j]; }
  Matrix& block(int i, int j) { return blocks_[2 * i + j]; }
  Matrix dense() const;

 private:
  std::vector<Matrix> blocks_;
};

HybridOperator operator*(const HybridOperator& lhs, const HybridOperator& rhs);

/// exp[(c a^dag - c^* a) (x) sigma_z / 2]: displaces by +c/2 when the ancilla
/// is in |0> and by -c/2 when it is in |1>.
HybridOperator conditional_displacement(Complex c, int osc_dim);

/// <bra| U |ket> on the ancilla, leaving an oscillator operator.
Matrix ancilla_matrix_element(const HybridOperator& u, const Qubit& bra, const Qubit& ket);

/// State on ancilla (x) oscillator; index = ancilla * osc_dim + n.
class HybridState {
 public:
  static HybridState product(const Qubit& ancilla, const OscillatorState& osc);

  int osc_dim() const { return osc_dim_; }
  const Matrix& density() const { return rho_; }
  HybridState evolved(const HybridOperator& u) const;
  /// Probability of projecting the ancilla onto `outcome` and the resulting
  /// (normalized) conditional oscillator state.
  std::pair<double, OscillatorState> measure(const Qubit& outcome) const;
  OscillatorState partial_trace_ancilla() const;

 private:
  HybridState(int osc_dim, Matrix rho) : osc_dim_(osc_dim), rho_(std::move(rho)) {}
  int osc_dim_;
  Matrix rho_;
};

/// Re-evaluates `observable(dim)` at dim and dim + extra and reports whether
/// the two agree within `tol`.
struct ConvergenceReport {
  double value = 0.0;
  double value_enlarged = 0.0;
  double difference = 0.0;
  bool converged = false;
};
ConvergenceReport check_truncation(const std::function<double(int)>& observable, int dim,
                                   double tol, int extra = 20);

}  // namespace gkpkerr
