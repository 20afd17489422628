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

#include "gkpkerr/decoders.hpp"
#include "gkpkerr/errors.hpp"
#include "gkpkerr/evolution.hpp"
#include "gkpkerr/gates.hpp"
#include "gkpkerr/gkp_code.hpp"
#include "gkpkerr/sbs.hpp"
#include "oracles.hpp"

namespace gkpkerr {
namespace {

const double kTk = kPi / 4.0;

double perfect_ed_fidelity(const OscillatorState& s, const GkpCode& code) {
  return logical_fidelity(decode_perfect_ed(s, code).rho_l, magic_target());
}

TEST(Lindblad, ClosedSystemKerrIsTheGate) {
  const GkpCode code = GkpCode::build(0.36);
  const OscillatorState in = logical_state(code, LogicalLabel::kPlusY);
  const EvolutionResult r = lindblad_evolve(in, kerr_hamiltonian(code.dim(), -1.0), NoiseSpec{0.0, 0.0, kTk});
  const Vector target = kerr_unitary(code.dim()) * in.ket();
  EXPECT_GE(fidelity(r.state, target), 1.0 - 1e-8);
  EXPECT_GE(r.steps, 2000);
  EXPECT_LE(r.max_trace_drift, 1e-8);
}

TEST(Lindblad, DampedCoherentState) {
  const int d = 30;
  const OscillatorState in = OscillatorState::coherent(1.0, d);
  const FockOperator zero(Matrix::Zero(d, d), OperatorKind::kHermitian);
  const EvolutionResult r = lindblad_evolve(in, zero, NoiseSpec{0.2, 0.0, 1.0});
  const Vector target = OscillatorState::coherent(std::exp(-0.1), d).ket();
  EXPECT_GE(fidelity(r.state, target), 1.0 - 1e-7);
}

TEST(Lindblad, VacuumIsFixedPoint) {
  const int d = 20;
  const EvolutionResult r =
      lindblad_evolve(OscillatorState::fock(0, d), kerr_hamiltonian(d, -1.0), NoiseSpec{0.7, 0.3, 1.3});
  EXPECT_LT(max_abs(r.state.density() - OscillatorState::fock(0, d).density()), 1e-14);
}

TEST(Lindblad, MatchesExactDiagonalSolution) {
  const int d = 24;
  const Matrix rho0 = oracle::random_low_density(d, 16, 9);
  Eigen::VectorXd energies(d);
  for (int n = 0; n < d; ++n) energies(n) = -0.5 * n * n;
  for (const auto& [kappa, kappa_phi] : {std::pair{0.05, 0.0}, std::pair{0.05, 0.02}, std::pair{0.0, 0.1}}) {
    const EvolutionResult r = lindblad_evolve(OscillatorState::from_density(rho0), kerr_hamiltonian(d, -1.0),
                                              NoiseSpec{kappa, kappa_phi, kTk});
    const Matrix ref = oracle::diagonal_lindblad(rho0, energies, kappa, kappa_phi, kTk);
    EXPECT_LT(max_abs(r.state.density() - ref), 1e-10) << kappa << " " << kappa_phi;
  }
}

TEST(Lindblad, MatchesSuperoperatorForNonDiagonalHamiltonian) {
  const int d = 10;
  const Matrix h = position_op(d).matrix() + 0.3 * ladder_ops(d).n.matrix();
  const Matrix rho0 = oracle::random_low_density(d, 5, 4);
  const EvolutionResult r = lindblad_evolve(OscillatorState::from_density(rho0),
                                            FockOperator(h, OperatorKind::kHermitian), NoiseSpec{0.2, 0.05, 0.9});
  const Matrix ref = oracle::superop_evolve(rho0, h, 0.2, 0.05, 0.9);
  EXPECT_LT(max_abs(r.state.density() - ref), 1e-10);
}

TEST(Lindblad, EnergyDecayOfCodewords) {
  for (double delta : {0.36, 0.25}) {
    const GkpCode code = GkpCode::build(delta);
    const int d = code.dim();
    const OscillatorState in = OscillatorState::from_ket(code.codeword(0));
    const FockOperator zero(Matrix::Zero(d, d), OperatorKind::kHermitian);
    const double kappa = 0.1 / kTk;
    const EvolutionResult r = lindblad_evolve(in, zero, NoiseSpec{kappa, 0.0, kTk});
    const FockOperator n = ladder_ops(d).n;
    const double expected = in.expectation(n) * std::exp(-kappa * kTk);
    EXPECT_NEAR(r.state.expectation(n) / expected, 1.0, 1e-6) << delta;
  }
}

TEST(Lindblad, StepHalvingConvergence) {
  const GkpCode code = GkpCode::build(0.36);
  const OscillatorState in = logical_state(code, LogicalLabel::kPlusY);
  const NoiseSpec noise = NoiseSpec::from_gamma(1e-2, kTk);
  const FockOperator h = kerr_hamiltonian(code.dim(), -1.0);
  IntegratorOptions fine;
  fine.step_scale = 0.5;
  const EvolutionResult coarse_run = lindblad_evolve(in, h, noise);
  const EvolutionResult fine_run = lindblad_evolve(in, h, noise, fine);
  EXPECT_NEAR(fine_run.step, 0.5 * coarse_run.step, 1e-15);
  EXPECT_LT(std::abs(perfect_ed_fidelity(coarse_run.state, code) - perfect_ed_fidelity(fine_run.state, code)), 1e-9);
}

TEST(Lindblad, DiagnosticsWithinTolerances) {
  const GkpCode code = GkpCode::build(0.36);
  const EvolutionResult r = lindblad_evolve(logical_state(code, LogicalLabel::kPlusY),
                                            kerr_hamiltonian(code.dim(), -1.0), NoiseSpec::from_gamma(3e-2, kTk, 0.01));
  EXPECT_LE(r.max_trace_drift, 1e-8);
  EXPECT_GE(r.min_eigenvalue, -1e-7);
  EXPECT_NEAR(r.state.trace(), 1.0, 1e-8);
}

TEST(Lindblad, UnstableStepRaisesIntegratorFailure) {
  const GkpCode code = GkpCode::build(0.36);
  IntegratorOptions reckless;
  reckless.min_steps = 1;
  reckless.safety = 50.0;
  try {
    lindblad_evolve(logical_state(code, LogicalLabel::kPlusY), kerr_hamiltonian(code.dim(), -1.0),
                    NoiseSpec::from_gamma(1e-2, kTk), reckless);
    FAIL() << "expected an integrator failure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIntegratorFailure);
  }
}

TEST(Lindblad, RejectsBadInputs) {
  const int d = 8;
  const FockOperator h = kerr_hamiltonian(d, -1.0);
  EXPECT_THROW(lindblad_evolve(OscillatorState::fock(0, d), h, NoiseSpec{-1.0, 0.0, 1.0}), Error);
  EXPECT_THROW(lindblad_evolve(OscillatorState::fock(0, d + 1), h, NoiseSpec{0.1, 0.0, 1.0}), Error);
  Matrix skew = Matrix::Zero(d, d);
  skew(0, 1) = 1.0;
  EXPECT_THROW(lindblad_evolve(OscillatorState::fock(0, d), FockOperator(skew), NoiseSpec{0.1, 0.0, 1.0}), Error);
}

TEST(LossParameter, Conversions) {
  EXPECT_EQ(gamma_to_kappa(0.0, 1.0), 0.0);
  const double kappa = gamma_to_kappa(1.07e-2, 6.3e-6);
  EXPECT_NEAR(1.0 / kappa, 585.6e-6, 0.5e-6);
  for (double g : {1e-6, 1e-3, 1.07e-2, 0.3, 0.99}) {
    EXPECT_NEAR(kappa_to_gamma(gamma_to_kappa(g, 2.5), 2.5), g, 1e-14 * std::max(1.0, g)) << g;
    const NoiseSpec n = NoiseSpec::from_gamma(g, 2.5);
    EXPECT_NEAR(n.gamma(), 1.0 - std::exp(-n.kappa * n.duration), 1e-14);
  }
  EXPECT_THROW(gamma_to_kappa(1.0, 1.0), Error);
  EXPECT_THROW(gamma_to_kappa(-0.1, 1.0), Error);
  EXPECT_THROW((NoiseSpec{0.1, -0.2, 1.0}).validate(), Error);
}

TEST(LossChannel, KrausFormMatchesMasterEquation) {
  const int d = 20;
  const Matrix rho0 = oracle::random_low_density(d, 14, 21);
  const double gamma = 0.13;
  const KrausSet k = loss_channel(d, gamma);
  EXPECT_LT(kraus_completeness_defect(k, d), 1e-13);
  const Matrix ref = oracle::diagonal_lindblad(rho0, Eigen::VectorXd::Zero(d), gamma_to_kappa(gamma, 1.0), 0.0, 1.0);
  EXPECT_LT(max_abs(apply_kraus(k, rho0) - ref), 1e-12);
  const KrausSet none = loss_channel(d, 0.0);
  ASSERT_EQ(none.size(), 1u);
  EXPECT_LT(max_abs(none.front() - Matrix::Identity(d, d)), 1e-15);
}

// One photon lost before the gate is turned into a logical error by the
// Kerr conjugation, while the same loss after the gate stays decodable.
TEST(AmplifiedError, LossBeforeGateRuinsLogicalInformation) {
  const GkpCode code = GkpCode::build(0.36);
  const SbsChannel ch = build_sbs_round(SbsParams::for_delta(0.36), code.dim());
  const SbsBasis basis = build_sbs_basis(code, ch);
  const FockOperator a = ladder_ops(code.dim()).a;
  const FockOperator u = kerr_unitary(code.dim());
  const OscillatorState in = logical_state(code, LogicalLabel::kPlusY);
  const OscillatorState before = apply(u, apply(a, in).normalized());
  const OscillatorState after = apply(a, apply(u, in)).normalized();
  const double f_before = logical_fidelity(decode_sbs(before, basis), magic_target());
  const double f_after = logical_fidelity(decode_sbs(after, basis), magic_target());
  EXPECT_LT(f_before, 0.75);
  EXPECT_GT(f_after, 0.95);
  EXPECT_NEAR(f_before, 0.5079159409, 1e-6);
  EXPECT_NEAR(f_after, 0.9910265860, 1e-6);
}

}  // namespace
}  // namespace gkpkerr
