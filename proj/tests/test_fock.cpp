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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gkpkerr/errors.hpp"
#include "gkpkerr/fock.hpp"
#include "oracles.hpp"

namespace gkpkerr {
namespace {

const Complex kI(0.0, 1.0);

template <typename Fn>
ErrorKind error_kind_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected gkpkerr::Error";
  return ErrorKind::kInvalidArgument;
}

TEST(LadderOps, SmallDimensionEntries) {
  const auto ops = ladder_ops(3);
  EXPECT_EQ(ops.a.matrix()(0, 1), Complex(1.0));
  EXPECT_NEAR(std::abs(ops.a.matrix()(1, 2) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(ops.a.matrix()(1, 0), Complex(0.0));
  Matrix expected_n = Matrix::Zero(3, 3);
  expected_n.diagonal() << 0.0, 1.0, 2.0;
  EXPECT_EQ(ops.n.matrix(), expected_n);
  EXPECT_EQ(ops.adag.matrix(), ops.a.matrix().adjoint());
}

TEST(LadderOps, CanonicalCommutatorHoldsOnInteriorOnly) {
  const auto ops = ladder_ops(8);
  const Matrix c = commutator(ops.a, ops.adag).matrix();
  const Matrix id = Matrix::Identity(8, 8);
  EXPECT_LT(interior_max_abs(c - id, 7), 1e-14);
  // The truncation shows up in the last diagonal element: 1 - 8 = -7.
  EXPECT_NEAR(c(7, 7).real(), -7.0, 1e-14);
  EXPECT_GT(max_abs(c - id), 1.0);
}

TEST(LadderOps, RejectsTinyDimension) {
  EXPECT_EQ(error_kind_of([] { ladder_ops(1); }), ErrorKind::kInvalidDimension);
  EXPECT_EQ(error_kind_of([] { FockOperator::identity(0); }), ErrorKind::kInvalidDimension);
  EXPECT_EQ(error_kind_of([] { FockOperator(Matrix::Zero(2, 3)); }), ErrorKind::kInvalidDimension);
}

TEST(LadderOps, QuadraturesCommuteToI) {
  const int d = 30;
  const Matrix c = commutator(position_op(d), momentum_op(d)).matrix();
  EXPECT_LT(interior_max_abs(c - kI * Matrix::Identity(d, d), d - 1), 1e-13);
  EXPECT_LT(hermiticity_defect(position_op(d).matrix()), 1e-15);
  EXPECT_LT(hermiticity_defect(momentum_op(d).matrix()), 1e-15);
}

TEST(Displacement, ZeroIsIdentity) {
  EXPECT_LT(max_abs(displacement(0.0, 12).matrix() - Matrix::Identity(12, 12)), 1e-15);
}

TEST(Displacement, VacuumOverlapMatchesCoherentState) {
  const Complex alpha = 1.0;
  const Matrix d = displacement(alpha, 40).matrix();
  EXPECT_NEAR(std::norm(d(0, 0)), std::exp(-1.0), 1e-8);
  // Full column against the closed-form coherent amplitudes.
  const Vector ref = oracle::coherent(alpha, 40);
  EXPECT_LT((d.col(0) - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Displacement, InverseOnInterior) {
  const Complex alpha(0.5, 0.3);
  const Matrix prod = (displacement(alpha, 40) * displacement(-alpha, 40)).matrix();
  EXPECT_LT(interior_max_abs(prod - Matrix::Identity(40, 40), 30), 1e-9);
}

TEST(Displacement, CompositionLawWithPhase) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  // Truncation couples level n to n +- O(|alpha| sqrt(n)), so only a block
  // well inside the truncation is exact.
  const int d = 80;
  for (int trial = 0; trial < 6; ++trial) {
    Complex alpha(u(rng), u(rng)), beta(u(rng), u(rng));
    if (std::abs(alpha) > 1.0) alpha /= std::abs(alpha);
    if (std::abs(beta) > 1.0) beta /= std::abs(beta);
    const Matrix lhs = (displacement(alpha, d) * displacement(beta, d)).matrix();
    const Complex phase = std::exp(0.5 * (alpha * std::conj(beta) - std::conj(alpha) * beta));
    const Matrix rhs = phase * displacement(alpha + beta, d).matrix();
    EXPECT_LT(interior_max_abs(lhs - rhs, 20), 1e-10) << "trial " << trial;
  }
}

TEST(Displacement, ShiftsQuadraturesBySqrt2Alpha) {
  const int d = 60;
  const Complex alpha(0.7, -0.4);
  const OscillatorState s = apply(displacement(alpha, d), OscillatorState::fock(0, d));
  EXPECT_NEAR(s.expectation(position_op(d)), std::sqrt(2.0) * alpha.real(), 1e-10);
  EXPECT_NEAR(s.expectation(momentum_op(d)), std::sqrt(2.0) * alpha.imag(), 1e-10);
  const OscillatorState t = apply(displacement_qp(0.3, -1.1, d), OscillatorState::fock(0, d));
  EXPECT_NEAR(t.expectation(position_op(d)), 0.3, 1e-10);
  EXPECT_NEAR(t.expectation(momentum_op(d)), -1.1, 1e-10);
}

TEST(Displacement, MatchesPaddedReference) {
  const Complex alpha(0.9, 0.2);
  const int d = 40;
  EXPECT_LT(interior_max_abs(displacement(alpha, d).matrix() - oracle::displacement(alpha, d), 25), 1e-9);
}

TEST(Expm, ZeroGivesIdentity) {
  const FockOperator zero(Matrix::Zero(5, 5), OperatorKind::kHermitian);
  EXPECT_LT(max_abs(expm(zero, kI).matrix() - Matrix::Identity(5, 5)), 1e-15);
}

TEST(Expm, NumberPhaseIsPowersOfI) {
  const auto ops = ladder_ops(9);
  const Matrix u = expm(ops.n, kI * (kPi / 2.0)).matrix();
  Complex expected = 1.0;
  for (int n = 0; n < 9; ++n) {
    EXPECT_LT(std::abs(u(n, n) - expected), 1e-15) << n;
    expected *= kI;
  }
  EXPECT_TRUE(expm(ops.n, kI).is_diagonal());
}

TEST(Expm, RandomHermitianAgainstEigendecomposition) {
  const Matrix h = oracle::random_hermitian(16, 3);
  const FockOperator a(h, OperatorKind::kHermitian);
  const FockOperator u = expm(a, kI);
  const FockOperator v = expm(a, -kI);
  EXPECT_EQ(u.kind(), OperatorKind::kUnitary);
  EXPECT_LT(max_abs((u * v).matrix() - Matrix::Identity(16, 16)), 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector phases = (kI * es.eigenvalues().cast<Complex>().array()).exp();
  const Matrix ref = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  EXPECT_LT(max_abs(u.matrix() - ref), 1e-11);
}

TEST(Expm, RejectsNonFinite) {
  Matrix m = Matrix::Zero(3, 3);
  m(1, 2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(error_kind_of([&] { expm(FockOperator(m), kI); }), ErrorKind::kNumeric);
  EXPECT_EQ(error_kind_of([] { expm(FockOperator::identity(3), Complex(INFINITY, 0.0)); }), ErrorKind::kNumeric);
}

TEST(Unitary, PreservesNormOfInteriorStates) {
  const int d = 50;
  const FockOperator u = displacement(Complex(0.4, 0.8), d);
  EXPECT_LT(unitarity_defect(u), 1e-10);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    Vector psi = Vector::Zero(d);
    for (int n = 0; n < 20; ++n) psi(n) = Complex(g(rng), g(rng));
    psi.normalize();
    EXPECT_NEAR((u * psi).norm(), 1.0, 1e-9);
  }
}

TEST(OscillatorState, KetBookkeeping) {
  Vector v = Vector::Zero(4);
  v(1) = 3.0;
  v(2) = Complex(0.0, 4.0);
  const OscillatorState s = OscillatorState::from_ket(v);
  EXPECT_TRUE(s.is_pure());
  EXPECT_NEAR(s.ket().norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.trace(), 1.0, 1e-15);
  EXPECT_NEAR(s.photon_distribution()(2), 16.0 / 25.0, 1e-15);
  EXPECT_NEAR(s.expectation(ladder_ops(4).n), (9.0 + 32.0) / 25.0, 1e-14);
  EXPECT_EQ(error_kind_of([] { OscillatorState::from_ket(Vector::Zero(4)); }), ErrorKind::kNumeric);
}

TEST(OscillatorState, DensityValidation) {
  const Matrix rho = oracle::random_density(6, 2, 5);
  const OscillatorState s = OscillatorState::from_density(rho);
  EXPECT_FALSE(s.is_pure());
  EXPECT_NEAR(s.trace(), 1.0, 1e-14);
  EXPECT_GT(min_eigenvalue(s.density()), -1e-12);
  // Wrong trace and non-Hermitian inputs are rejected.
  EXPECT_ANY_THROW(OscillatorState::from_density(2.0 * rho));
  Matrix skew = rho;
  skew(0, 1) += 0.1;
  EXPECT_ANY_THROW(OscillatorState::from_density(skew));
  // Positivity is not checked on construction; min_eigenvalue reports it.
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_NEAR(min_eigenvalue(OscillatorState::from_density(neg).density()), -0.5, 1e-15);
  // An unnormalized post-selected state carries its own weight.
  const OscillatorState w = OscillatorState::from_density(0.25 * rho, 0.25);
  EXPECT_NEAR(w.trace(), 0.25, 1e-14);
  EXPECT_NEAR(w.normalized().trace(), 1.0, 1e-14);
}

TEST(OscillatorState, CoherentMatchesReference) {
  const Complex alpha(1.2, -0.5);
  const OscillatorState s = OscillatorState::coherent(alpha, 50);
  const Vector ref = oracle::coherent(alpha, 50).normalized();
  EXPECT_NEAR(std::abs(s.ket().dot(ref)), 1.0, 1e-13);
  EXPECT_NEAR(s.expectation(ladder_ops(50).n), std::norm(alpha), 1e-10);
}

TEST(OscillatorState, FidelityAndTraceDistance) {
  const OscillatorState f0 = OscillatorState::fock(0, 5);
  const OscillatorState f1 = OscillatorState::fock(1, 5);
  EXPECT_NEAR(fidelity(f0, f0.ket()), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(f0, f1.ket()), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(f0.density(), f1.density()), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(f0.density(), f0.density()), 0.0, 1e-12);
  // Equal mixture against a pure component: distance 1/2.
  const Matrix mix = 0.5 * (f0.density() + f1.density());
  EXPECT_NEAR(trace_distance(mix, f0.density()), 0.5, 1e-12);
  EXPECT_NEAR(fidelity(OscillatorState::from_density(mix), f1.ket()), 0.5, 1e-15);
  // Global phases do not matter.
  EXPECT_NEAR(fidelity(f1, std::polar(1.0, 0.7) * f1.ket()), 1.0, 1e-15);
}

TEST(Hybrid, ConditionalIsBlockDiagonal) {
  const int d = 6;
  const Matrix on0 = displacement(0.3, d).matrix();
  const Matrix on1 = displacement(-0.3, d).matrix();
  const HybridOperator c = HybridOperator::conditional(on0, on1);
  EXPECT_EQ(c.block(0, 0), on0);
  EXPECT_EQ(c.block(1, 1), on1);
  EXPECT_EQ(c.block(0, 1), Matrix::Zero(d, d));
  EXPECT_EQ(c.block(1, 0), Matrix::Zero(d, d));
}

TEST(Hybrid, ConditionalDisplacementMatchesKroneckerExponential) {
  const int d = 30;
  const Complex c(0.4, 0.9);
  const Matrix ours = conditional_displacement(c, d).dense();
  const Matrix ref = oracle::conditional_displacement(c, d);
  EXPECT_LT(max_abs(ours - ref), 1e-12);
}

TEST(Hybrid, MeasurementAndPartialTrace) {
  const int d = 20;
  const Qubit plus = Qubit(1.0, 1.0) / std::sqrt(2.0);
  const Qubit minus = Qubit(1.0, -1.0) / std::sqrt(2.0);
  const HybridState s0 = HybridState::product(plus, OscillatorState::fock(0, d));
  const HybridState s = s0.evolved(conditional_displacement(Complex(0.8, 0.0), d));
  const auto [pg, rho_g] = s.measure(plus);
  const auto [pe, rho_e] = s.measure(minus);
  EXPECT_NEAR(pg + pe, 1.0, 1e-12);
  // <+|CD|+> = (D(c/2) + D(-c/2))/2 on vacuum: P(+) = (1 + e^{-|c|^2/2}) / 2.
  EXPECT_NEAR(pg, 0.5 * (1.0 + std::exp(-0.5 * 0.64)), 1e-10);
  EXPECT_NEAR(rho_g.trace(), 1.0, 1e-12);
  const OscillatorState reduced = s.partial_trace_ancilla();
  EXPECT_NEAR(reduced.trace(), 1.0, 1e-12);
  EXPECT_GT(min_eigenvalue(reduced.density()), -1e-12);
  EXPECT_LT(max_abs(reduced.density() - (pg * rho_g.density() + pe * rho_e.density())), 1e-12);
}

TEST(Truncation, ConvergenceUtilityReportsDifference) {
  auto overlap = [](int dim) {
    const OscillatorState s = OscillatorState::coherent(Complex(2.0, 0.0), dim);
    return s.photon_distribution()(4);
  };
  const ConvergenceReport ok = check_truncation(overlap, 40, 1e-10);
  EXPECT_TRUE(ok.converged);
  EXPECT_NEAR(ok.value, ok.value_enlarged, 1e-10);
  const ConvergenceReport bad = check_truncation(overlap, 6, 1e-10);
  EXPECT_FALSE(bad.converged);
  EXPECT_GT(bad.difference, 1e-3);
}

}  // namespace
}  // namespace gkpkerr
