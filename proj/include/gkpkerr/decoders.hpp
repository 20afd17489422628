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

#include <vector>

#include "gkpkerr/fock.hpp"
#include "gkpkerr/gkp_code.hpp"
#include "gkpkerr/sbs.hpp"

namespace gkpkerr {

/// Logical qubit density matrix.
using LogicalQubit = Matrix2;

/// max deviation of rho_L from a Hermitian, unit-trace, positive matrix.
double logical_qubit_defect(const LogicalQubit& rho_l);

/// <target| rho_L |target> for a normalized target.
double logical_fidelity(const LogicalQubit& rho_l, const Qubit& target);

/// Undoes an accumulated Pauli frame: F^dag rho_L F.
LogicalQubit undo_frame(const LogicalQubit& rho_l, const Matrix2& frame);

struct PerfectEdResult {
  LogicalQubit rho_l;
  /// Tr(P rho P^dag), P = |0><0_delta| + |1><1_delta|.
  double success_prob = 0.0;
  /// Re Tr(rho Pi) with Pi the orthogonal projector onto span{|0_delta>, |1_delta>}.
  double span_weight = 0.0;
};

/// Perfect-error-detection decoder. With `lowdin` the rows of P are the
/// Lowdin-orthonormalized codewords instead of the raw ones. Throws kNumeric
/// when the retained trace is below 1e-14.
PerfectEdResult decode_perfect_ed(const OscillatorState& rho, const GkpCode& code, bool lowdin = false);

/// Error label of a basis cell. Remainder cells from the orthogonal
/// completion carry remainder = true and a running index in q.
struct ErrorLabel {
  int q = 0;
  int p = 0;
  bool remainder = false;
};

enum class BasisAnchor {
  /// (0,0) cell spans the sBs fixed point reached from the codewords.
  kFixedPoint,
  /// (0,0) cell spans the Lowdin-orthonormalized codewords.
  kCodewords,
};

struct SbsBasisOptions {
  BasisAnchor anchor = BasisAnchor::kFixedPoint;
  /// Shift grid half width M; cells (i, j) with |i|, |j| <= M are displaced by
  /// (i h, j h), h = sqrt(pi) / (2M + 1). Negative selects the default for dim.
  int half_width = -1;
  /// Even number of K_gg applications used to reach the fixed point.
  int anchor_rounds = 60;
  /// Candidate cells whose smallest singular value falls below this are skipped.
  double rank_tol = 1e-6;
};

/// Default grid half width floor((sqrt(dim / 2) - 1) / 2), at least 1.
int default_basis_half_width(int dim);

/// Orthonormal basis of the truncated space grouped in cells of two states
/// {|e,0>, |e,1>}.
struct SbsBasis {
  /// Column 2 c + mu is |e_c, mu>.
  Matrix vectors;
  std::vector<ErrorLabel> labels;
  int half_width = 0;
  double step = 0.0;

  int cells() const { return static_cast<int>(labels.size()); }
  Eigen::MatrixX2cd cell(int c) const { return vectors.middleCols(2 * c, 2); }
  /// max |B^dag B - I|.
  double orthonormality_defect() const;
  /// max |B B^dag - I| on the interior block.
  double completeness_defect(int interior_dim) const;
};

/// Builds the basis from displaced copies of the anchor pair, orthogonalized
/// cell by cell in order of shift length, then completes it with eigenvectors
/// of cos(sqrt(pi) q) on the remaining space, pairing the most positive with
/// the most negative. Throws kBasisConstruction for odd dimensions or when
/// the completion is degenerate.
SbsBasis build_sbs_basis(const GkpCode& code, const SbsChannel& channel, const SbsBasisOptions& options = {});

/// |(0,0), psi> for a logical qubit vector psi.
Vector encode_in_cell(const SbsBasis& basis, const Qubit& logical, int cell = 0);

/// Subsystem decoder: sum over cells e of P_e rho P_e^dag, P_e = |0><e,0| + |1><e,1|.
LogicalQubit decode_sbs(const OscillatorState& rho, const SbsBasis& basis);

}  // namespace gkpkerr
