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
#include <map>

#include "gkpkerr/config.hpp"
#include "gkpkerr/decoders.hpp"
#include "gkpkerr/errors.hpp"
#include "gkpkerr/evolution.hpp"
#include "gkpkerr/gates.hpp"
#include "oracles.hpp"

namespace gkpkerr {
namespace {

const Complex kI(0.0, 1.0);

struct Fixture {
  GkpCode code;
  SbsChannel channel;
  SbsBasis basis;
};

const Fixture& fixture(double delta) {
  static std::map<double, Fixture> cache;
  auto it = cache.find(delta);
  if (it == cache.end()) {
    GkpCode code = GkpCode::build(delta);
    SbsChannel ch = build_sbs_round(SbsParams::for_delta(delta), code.dim());
    SbsBasis basis = build_sbs_basis(code, ch);
    it = cache.emplace(delta, Fixture{std::move(code), std::move(ch), std::move(basis)}).first;
  }
  return it->second;
}

LogicalQubit random_qubit(std::uint64_t seed) {
  const oracle::Matrix r = oracle::random_density(2, 2, seed);
  return LogicalQubit(r);
}

TEST(LogicalFidelity, Examples) {
  const Qubit y = qubit_state("+i");
  EXPECT_NEAR(logical_fidelity(y * y.adjoint(), y), 1.0, 1e-15);
  const LogicalQubit mixed = 0.5 * Matrix2::Identity();
  for (const char* t : {"0", "+", "-i", "+H"}) EXPECT_NEAR(logical_fidelity(mixed, qubit_state(t)), 0.5, 1e-15);
  EXPECT_NEAR(logical_fidelity(y * y.adjoint(), std::polar(1.0, 1.1) * y), 1.0, 1e-15);
  EXPECT_LT((magic_target() - sqrt_h_target().matrix * y).norm(), 1e-15);
}

TEST(LogicalFidelity, DefectAndFrame) {
  const LogicalQubit r = random_qubit(3);
  EXPECT_LT(logical_qubit_defect(r), 1e-12);
  LogicalQubit bad = r;
  bad(0, 0) += 0.1;
  EXPECT_GT(logical_qubit_defect(bad), 0.05);
  const Matrix2 f = pauli_x() * pauli_z();
  const LogicalQubit framed = f * r * f.adjoint();
  EXPECT_LT((undo_frame(framed, f) - r).norm(), 1e-15);
}

TEST(PerfectEd, CodewordDecodesWithOverlapCorrection) {
  const GkpCode& code = fixture(0.36).code;
  const PerfectEdResult r = decode_perfect_ed(OscillatorState::from_ket(code.codeword(0)), code);
  const double ov2 = std::norm(code.codeword_overlap());
  const double f = logical_fidelity(r.rho_l, qubit_state("0"));
  EXPECT_GE(f, 1.0 - ov2);
  EXPECT_NEAR(f, 1.0 / (1.0 + ov2), 1e-14);
  EXPECT_NEAR(r.success_prob, 1.0 + ov2, 1e-14);
  EXPECT_NEAR(r.span_weight, 1.0, 1e-12);
  EXPECT_LT(logical_qubit_defect(r.rho_l), 1e-12);
}

TEST(PerfectEd, GateOutputWithoutLoss) {
  const GkpCode& code = fixture(0.25).code;
  const OscillatorState out = apply(kerr_unitary(code.dim()), logical_state(code, LogicalLabel::kPlusY));
  EXPECT_GE(logical_fidelity(decode_perfect_ed(out, code).rho_l, magic_target()), 1.0 - 1e-8);
}

TEST(PerfectEd, OrthogonalJunkIsIgnored) {
  const GkpCode& code = fixture(0.36).code;
  const int d = code.dim();
  const OscillatorState psi = logical_state(code, LogicalLabel::kPlusY);
  // Odd Fock states are orthogonal to both even-parity codewords.
  const Matrix junk = 0.5 * (OscillatorState::fock(1, d).density() + OscillatorState::fock(7, d).density());
  const Matrix rho = 0.7 * psi.density() + 0.3 * junk;
  const PerfectEdResult clean = decode_perfect_ed(psi, code);
  const PerfectEdResult mixed = decode_perfect_ed(OscillatorState::from_density(rho), code);
  EXPECT_LT((clean.rho_l - mixed.rho_l).norm(), 1e-14);
  EXPECT_NEAR(mixed.success_prob, 0.7 * clean.success_prob, 1e-14);
}

TEST(PerfectEd, GlobalPhaseAndUndecodableInput) {
  const GkpCode& code = fixture(0.36).code;
  const Vector psi = logical_state(code, LogicalLabel::kPlus).ket();
  const PerfectEdResult a = decode_perfect_ed(OscillatorState::from_ket(psi), code);
  const PerfectEdResult b = decode_perfect_ed(OscillatorState::from_ket(std::polar(1.0, 2.0) * psi), code);
  EXPECT_LT((a.rho_l - b.rho_l).norm(), 1e-14);
  try {
    decode_perfect_ed(OscillatorState::fock(3, code.dim()), code);
    FAIL() << "expected an undecodable-state error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumeric);
  }
  EXPECT_THROW(decode_perfect_ed(OscillatorState::fock(0, 10), code), Error);
}

TEST(PerfectEd, LowdinVariantOnCodeSpace) {
  const GkpCode& code = fixture(0.36).code;
  const Eigen::MatrixX2cd w = code.lowdin_codewords();
  const LogicalQubit r = random_qubit(5);
  const Matrix rho = w * r * w.adjoint();
  const PerfectEdResult out = decode_perfect_ed(OscillatorState::from_density(rho), code, true);
  EXPECT_LT((out.rho_l - r).norm(), 1e-12);
  EXPECT_NEAR(out.success_prob, 1.0, 1e-12);
}

TEST(SbsBasis, StructureAtBothDeltas) {
  const std::pair<double, int> cases[] = {{0.36, 30}, {0.25, 50}};
  for (const auto& [delta, cells] : cases) {
    const Fixture& f = fixture(delta);
    EXPECT_EQ(f.basis.vectors.rows(), f.code.dim());
    EXPECT_EQ(f.basis.vectors.cols(), f.code.dim());
    EXPECT_EQ(f.basis.cells(), cells);
    EXPECT_EQ(f.basis.labels[0].q, 0);
    EXPECT_EQ(f.basis.labels[0].p, 0);
    EXPECT_FALSE(f.basis.labels[0].remainder);
    EXPECT_LT(f.basis.orthonormality_defect(), 1e-10);
    EXPECT_LT(f.basis.completeness_defect(f.code.dim() - kDefaultInteriorMargin), 1e-8);
    EXPECT_EQ(f.basis.half_width, default_basis_half_width(f.code.dim()));
    EXPECT_NEAR(f.basis.step, kSqrtPi / (2 * f.basis.half_width + 1), 1e-15);
    const Eigen::MatrixX2cd c0 = f.basis.cell(0);
    EXPECT_LT(std::abs(c0.col(0).dot(c0.col(1))), 1e-14);
    for (int mu = 0; mu < 2; ++mu) {
      EXPECT_GE(std::norm(c0.col(mu).dot(f.code.codeword(mu))), 0.99) << delta << " " << mu;
    }
  }
  EXPECT_EQ(default_basis_half_width(60), 2);
  EXPECT_EQ(default_basis_half_width(100), 3);
}

TEST(SbsBasis, CodewordOverlapFixtures) {
  const Eigen::MatrixX2cd c36 = fixture(0.36).basis.cell(0);
  EXPECT_NEAR(std::norm(c36.col(0).dot(fixture(0.36).code.codeword(0))), 0.99497, 1e-5);
  EXPECT_NEAR(std::norm(c36.col(1).dot(fixture(0.36).code.codeword(1))), 0.99741, 1e-5);
}

TEST(SbsBasis, CodewordAnchorSpansLowdinPair) {
  const Fixture& f = fixture(0.36);
  SbsBasisOptions opts;
  opts.anchor = BasisAnchor::kCodewords;
  const SbsBasis b = build_sbs_basis(f.code, f.channel, opts);
  const Eigen::MatrixX2cd w = f.code.lowdin_codewords();
  EXPECT_LT(max_abs(b.cell(0) - w), 1e-12);
  EXPECT_LT(b.orthonormality_defect(), 1e-10);
  EXPECT_LT(b.completeness_defect(f.code.dim() - kDefaultInteriorMargin), 1e-8);
}

TEST(SbsBasis, RejectsOddDimensionAndBadOptions) {
  const GkpCode code = GkpCode::build(0.36, 61);
  const SbsChannel ch = build_sbs_round(SbsParams::for_delta(0.36), 61);
  try {
    build_sbs_basis(code, ch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBasisConstruction);
  }
  SbsBasisOptions odd_rounds;
  odd_rounds.anchor_rounds = 3;
  EXPECT_THROW(build_sbs_basis(fixture(0.36).code, fixture(0.36).channel, odd_rounds), Error);
}

TEST(DecodeSbs, TracePreservingAndPositive) {
  const Fixture& f = fixture(0.36);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix rho = oracle::random_density(f.code.dim(), 4, seed);
    const LogicalQubit r = decode_sbs(OscillatorState::from_density(rho), f.basis);
    EXPECT_NEAR(r.trace().real(), 1.0, 1e-10);
    EXPECT_LT(hermiticity_defect(r), 1e-14);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix2>(r).eigenvalues().minCoeff(), -1e-12);
    const LogicalQubit half = decode_sbs(OscillatorState::from_density(0.25 * rho, 0.25), f.basis);
    EXPECT_NEAR(half.trace().real(), 0.25, 1e-10);
  }
}

TEST(DecodeSbs, SingleCellStateDecodesOnThatCell) {
  const Fixture& f = fixture(0.36);
  const Eigen::MatrixX2cd c0 = f.basis.cell(0);
  const LogicalQubit r = random_qubit(9);
  const Matrix rho = c0 * r * c0.adjoint();
  EXPECT_LT((decode_sbs(OscillatorState::from_density(rho), f.basis) - r).norm(), 1e-12);
  for (int cell : {0, 3, 17}) {
    const Vector v = encode_in_cell(f.basis, qubit_state("+i"), cell);
    const LogicalQubit out = decode_sbs(OscillatorState::from_ket(v), f.basis);
    EXPECT_NEAR(logical_fidelity(out, qubit_state("+i")), 1.0, 1e-12) << cell;
  }
  EXPECT_THROW(encode_in_cell(f.basis, qubit_state("0"), f.basis.cells()), Error);
}

TEST(DecodeSbs, AgreesWithPerfectEdOnCodewordCell) {
  const Fixture& f = fixture(0.36);
  SbsBasisOptions opts;
  opts.anchor = BasisAnchor::kCodewords;
  const SbsBasis b = build_sbs_basis(f.code, f.channel, opts);
  for (std::uint64_t seed : {4u, 5u}) {
    const LogicalQubit r = random_qubit(seed);
    const OscillatorState s = OscillatorState::from_density(b.cell(0) * r * b.cell(0).adjoint());
    const LogicalQubit a = decode_sbs(s, b);
    const LogicalQubit p = decode_perfect_ed(s, f.code, true).rho_l;
    EXPECT_LT((a - p).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(DecodeSbs, NeverBeatsPerfectEdWithoutPostSelection) {
  const Fixture& f = fixture(0.25);
  const OscillatorState in = logical_state(f.code, LogicalLabel::kPlusY);
  const FockOperator h = kerr_hamiltonian(f.code.dim(), -1.0);
  for (double gamma : SweepConfig::default_gammas()) {
    const EvolutionResult ev = lindblad_evolve(in, h, NoiseSpec::from_gamma(gamma, kPi / 4.0));
    const double f_ed = logical_fidelity(decode_perfect_ed(ev.state, f.code).rho_l, magic_target());
    const double f_sbs = logical_fidelity(decode_sbs(ev.state, f.basis), magic_target());
    EXPECT_LE(f_sbs, f_ed + 1e-9) << gamma;
  }
}

}  // namespace
}  // namespace gkpkerr
