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

#include "gkpkerr/wigner.hpp"

#include <cmath>

#include "gkpkerr/errors.hpp"

namespace gkpkerr {

RealVector linspace(double lo, double hi, int points) {
  if (points < 1) throw Error(ErrorKind::kInvalidArgument, "linspace needs at least one point");
  if (points == 1) return RealVector::Constant(1, lo);
  RealVector out(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out(i) = lo + step * i;
  out(points - 1) = hi;
  return out;
}

double wigner_resolvable_radius2(int dim) { return 2.0 * dim + 1.0; }

double WignerGrid::integral() const {
  // Trapezoidal rule on a uniform grid.
  auto weights = [](const RealVector& x) {
    RealVector w = RealVector::Zero(x.size());
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double h = x(i + 1) - x(i);
      w(i) += 0.5 * h;
      w(i + 1) += 0.5 * h;
    }
    return w;
  };
  const RealVector wq = weights(q);
  const RealVector wp = weights(p);
  return wp.transpose() * values * wq;
}

namespace {

// Clenshaw sum over normalized generalized Laguerre polynomials of order
// `order` at x, weighted by one diagonal c of the density matrix.
Eigen::ArrayXcd laguerre_diagonal(int order, const Eigen::ArrayXd& x, const Vector& c) {
  const Eigen::Index len = c.size();
  const double l = order;
  Eigen::ArrayXcd y0 = Eigen::ArrayXcd::Constant(x.size(), c(len - 1));
  Eigen::ArrayXcd y1 = Eigen::ArrayXcd::Zero(x.size());
  if (len >= 2) {
    y0.setConstant(c(len - 2));
    y1.setConstant(c(len - 1));
    double k = static_cast<double>(len);
    for (Eigen::Index i = 3; i <= len; ++i) {
      k -= 1.0;
      const Eigen::ArrayXcd next0 = c(len - i) - y1 * std::sqrt((k - 1.0) * (l + k - 1.0) / ((l + k) * k));
      y1 = y0 - y1 * ((l + 2.0 * k - 1.0) - x) / std::sqrt((l + k) * k);
      y0 = next0;
    }
  }
  return y0 - y1 * ((l + 1.0) - x) / std::sqrt(1.0 + l);
}

}  // namespace

WignerGrid wigner(const OscillatorState& state, const RealVector& q_grid, const RealVector& p_grid) {
  if (!q_grid.allFinite() || !p_grid.allFinite()) throw Error(ErrorKind::kInvalidArgument, "non-finite Wigner grid");
  const Matrix rho = state.density();
  const int dim = static_cast<int>(rho.rows());
  const int nq = static_cast<int>(q_grid.size());

  WignerGrid out;
  out.q = q_grid;
  out.p = p_grid;
  out.values = RealMatrix::Zero(p_grid.size(), nq);
  const double r2 = q_grid.cwiseAbs2().maxCoeff() + p_grid.cwiseAbs2().maxCoeff();
  out.resolution_warning = r2 > wigner_resolvable_radius2(dim);

  // Diagonals of rho, off-diagonal ones doubled.
  std::vector<Vector> diagonals(dim);
  for (int l = 0; l < dim; ++l) diagonals[l] = (l == 0 ? 1.0 : 2.0) * rho.diagonal(l);

  const double root2 = std::sqrt(2.0);
  for (Eigen::Index ip = 0; ip < p_grid.size(); ++ip) {
    // a2 = 2 alpha, b = |2 alpha|^2.
    Eigen::ArrayXcd a2(nq);
    for (int iq = 0; iq < nq; ++iq) a2(iq) = root2 * Complex(q_grid(iq), p_grid(ip));
    const Eigen::ArrayXd b = a2.abs2();
    // Horner over the diagonal index.
    Eigen::ArrayXcd w = laguerre_diagonal(dim - 1, b, diagonals[dim - 1]);
    for (int l = dim - 2; l >= 0; --l) w = laguerre_diagonal(l, b, diagonals[l]) + w * a2 / std::sqrt(l + 1.0);
    out.values.row(ip) = (w.real() * (-0.5 * b).exp() / kPi).matrix().transpose();
  }
  return out;
}

Complex wigner_displaced_parity(const OscillatorState& state, double q, double p) {
  // Work in a padded space so the displacement itself is not truncated.
  const int dim = state.dim();
  const int padded = dim + static_cast<int>(std::ceil(2.0 * (q * q + p * p))) + 60;
  Matrix rho = Matrix::Zero(padded, padded);
  rho.topLeftCorner(dim, dim) = state.density();
  const FockOperator d = displacement_qp(q, p, padded);
  Vector parity(padded);
  for (int n = 0; n < padded; ++n) parity(n) = (n % 2 == 0) ? 1.0 : -1.0;
  const Matrix displaced_parity = d.matrix() * parity.asDiagonal() * d.matrix().adjoint();
  return (rho * displaced_parity).trace() / kPi;
}

}  // namespace gkpkerr
