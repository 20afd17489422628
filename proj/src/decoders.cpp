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

#include "gkpkerr/decoders.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

double logical_qubit_defect(const LogicalQubit& rho_l) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(0.5 * (rho_l + rho_l.adjoint()));
  double defect = std::abs(rho_l.trace() - Complex(1.0));
  defect = std::max(defect, hermiticity_defect(rho_l));
  return std::max(defect, -es.eigenvalues().minCoeff());
}

double logical_fidelity(const LogicalQubit& rho_l, const Qubit& target) {
  const Qubit t = target.normalized();
  return std::real(t.dot(rho_l * t));
}

LogicalQubit undo_frame(const LogicalQubit& rho_l, const Matrix2& frame) { return frame.adjoint() * rho_l * frame; }

PerfectEdResult decode_perfect_ed(const OscillatorState& rho, const GkpCode& code, bool lowdin) {
  if (rho.dim() != code.dim()) throw Error(ErrorKind::kInvalidDimension, "state does not match code");
  Eigen::MatrixX2cd rows_t(code.dim(), 2);
  if (lowdin) {
    rows_t = code.lowdin_codewords();
  } else {
    rows_t.col(0) = code.codeword(0);
    rows_t.col(1) = code.codeword(1);
  }
  const Eigen::MatrixX2cd span = code.lowdin_codewords();
  PerfectEdResult out;
  Matrix2 projected;
  if (rho.is_pure()) {
    const Qubit amp = rows_t.adjoint() * rho.ket();
    projected = amp * amp.adjoint();
    out.span_weight = (span.adjoint() * rho.ket()).squaredNorm();
  } else {
    const Matrix& r = rho.density();
    projected = rows_t.adjoint() * r * rows_t;
    out.span_weight = std::real((span.adjoint() * r * span).trace());
  }
  out.success_prob = std::real(projected.trace());
  if (!(out.success_prob >= 1e-14)) {
    throw Error(ErrorKind::kNumeric, "state is undecodable: retained trace " + std::to_string(out.success_prob));
  }
  out.rho_l = projected / out.success_prob;
  return out;
}

int default_basis_half_width(int dim) {
  return std::max(1, static_cast<int>(std::floor((std::sqrt(dim / 2.0) - 1.0) / 2.0)));
}

double SbsBasis::orthonormality_defect() const {
  return max_abs(vectors.adjoint() * vectors - Matrix::Identity(vectors.cols(), vectors.cols()));
}

double SbsBasis::completeness_defect(int interior_dim) const {
  const Eigen::Index d = vectors.rows();
  return interior_max_abs(vectors * vectors.adjoint() - Matrix::Identity(d, d), interior_dim);
}

namespace {

// Removes the span of `q` from the columns of v (twice, for stability).
template <typename Columns>
void project_out(const Matrix& q, Columns& v) {
  if (q.cols() == 0) return;
  for (int pass = 0; pass < 2; ++pass) v -= q * (q.adjoint() * v);
}

}  // namespace

SbsBasis build_sbs_basis(const GkpCode& code, const SbsChannel& channel, const SbsBasisOptions& options) {
  const int dim = code.dim();
  if (channel.dim != dim) throw Error(ErrorKind::kInvalidDimension, "channel does not match code");
  if (dim % 2 != 0) throw Error(ErrorKind::kBasisConstruction, "SBS basis needs an even Fock dimension");
  if (options.anchor_rounds < 0 || options.anchor_rounds % 2 != 0) {
    throw Error(ErrorKind::kInvalidArgument, "anchor_rounds must be even and non-negative");
  }

  Eigen::MatrixX2cd anchor(dim, 2);
  anchor.col(0) = code.codeword(0);
  anchor.col(1) = code.codeword(1);
  if (options.anchor == BasisAnchor::kFixedPoint) {
    const Matrix k_gg = channel.p_half.by_outcome[kOutcomeG].front() * channel.q_half.by_outcome[kOutcomeG].front();
    for (int r = 0; r < options.anchor_rounds; ++r) {
      anchor = (k_gg * anchor).eval();
      anchor /= anchor.col(0).norm();
    }
  }

  SbsBasis basis;
  basis.half_width = options.half_width < 0 ? default_basis_half_width(dim) : options.half_width;
  basis.step = kSqrtPi / (2 * basis.half_width + 1);
  Matrix accepted(dim, 0);
  auto append = [&](const Eigen::MatrixX2cd& pair, ErrorLabel label) {
    const Matrix w = lowdin_orthonormalize(pair);
    accepted.conservativeResize(Eigen::NoChange, accepted.cols() + 2);
    accepted.rightCols(2) = w;
    basis.labels.push_back(label);
  };
  append(anchor, {0, 0, false});

  std::vector<std::pair<int, int>> shifts;
  const int m = basis.half_width;
  for (int i = -m; i <= m; ++i) {
    for (int j = -m; j <= m; ++j) {
      if (i != 0 || j != 0) shifts.emplace_back(i, j);
    }
  }
  std::stable_sort(shifts.begin(), shifts.end(), [](const auto& a, const auto& b) {
    const int ra = a.first * a.first + a.second * a.second;
    const int rb = b.first * b.first + b.second * b.second;
    return ra != rb ? ra < rb : a < b;
  });
  for (const auto& [i, j] : shifts) {
    if (accepted.cols() + 2 > dim) break;
    const FockOperator d = displacement_qp(i * basis.step, j * basis.step, dim);
    Eigen::MatrixX2cd pair = d.matrix() * anchor;
    pair /= pair.col(0).norm();
    project_out(accepted, pair);
    Eigen::JacobiSVD<Eigen::MatrixX2cd> svd(pair);
    if (svd.singularValues().minCoeff() < options.rank_tol) continue;
    append(pair, {i, j, false});
  }

  // Orthogonal completion, paired through cos(sqrt(pi) q).
  const int rest = dim - static_cast<int>(accepted.cols());
  if (rest > 0) {
    const Matrix complement_proj = Matrix::Identity(dim, dim) - accepted * accepted.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> pes(0.5 * (complement_proj + complement_proj.adjoint()));
    Matrix range(dim, rest);
    int found = 0;
    for (int k = dim - 1; k >= 0 && found < rest; --k) {
      if (pes.eigenvalues()(k) > 0.5) range.col(found++) = pes.eigenvectors().col(k);
    }
    if (found != rest) throw Error(ErrorKind::kBasisConstruction, "orthogonal completion has the wrong rank");
    project_out(accepted, range);
    const Matrix z = code.logical_z().matrix();
    const Matrix cos_q = 0.5 * (z + z.adjoint());
    Matrix reduced = range.adjoint() * cos_q * range;
    reduced = 0.5 * (reduced + reduced.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> zes(reduced);
    const Matrix rv = range * zes.eigenvectors();
    for (int t = 0; t < rest / 2; ++t) {
      accepted.conservativeResize(Eigen::NoChange, accepted.cols() + 2);
      accepted.col(accepted.cols() - 2) = rv.col(rest - 1 - t);
      accepted.col(accepted.cols() - 1) = rv.col(t);
      basis.labels.push_back({t, 0, true});
    }
  }
  basis.vectors = std::move(accepted);
  if (basis.orthonormality_defect() > 1e-9) {
    throw Error(ErrorKind::kBasisConstruction,
                "basis is not orthonormal: defect " + std::to_string(basis.orthonormality_defect()));
  }
  return basis;
}

Vector encode_in_cell(const SbsBasis& basis, const Qubit& logical, int cell) {
  if (cell < 0 || cell >= basis.cells()) throw Error(ErrorKind::kInvalidArgument, "cell index out of range");
  return basis.cell(cell) * logical.normalized();
}

LogicalQubit decode_sbs(const OscillatorState& rho, const SbsBasis& basis) {
  if (rho.dim() != basis.vectors.rows()) throw Error(ErrorKind::kInvalidDimension, "state does not match basis");
  LogicalQubit out = LogicalQubit::Zero();
  if (rho.is_pure()) {
    const Vector c = basis.vectors.adjoint() * rho.ket();
    for (int e = 0; e < basis.cells(); ++e) {
      const Qubit amp = c.segment<2>(2 * e);
      out += amp * amp.adjoint();
    }
  } else {
    const Matrix r = basis.vectors.adjoint() * rho.density() * basis.vectors;
    for (int e = 0; e < basis.cells(); ++e) out += r.block<2, 2>(2 * e, 2 * e);
  }
  return out;
}

}  // namespace gkpkerr
